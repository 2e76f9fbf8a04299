#include "scelab/payments.hpp"

#include "scelab/error.hpp"
#include "scelab/sampling.hpp"
#include "scelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scelab {

namespace {

double sum(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

PaymentVector linear_pay(std::span<const double> scores, double a, double b)
{
    PaymentVector p;
    p.values.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double v = a * scores[i] + b;
        if (v < 0.0)
            throw LiabilityError("linear payment negative for agent " + std::to_string(i) + " (" + std::to_string(v) + ")");
        p.values.push_back(v);
    }
    p.total = sum(p.values);
    return p;
}

double borda_beaten(std::span<const double> scores, std::size_t agent)
{
    std::size_t twice = 0;  // twice the beaten count, kept integral
    const double mine = scores[agent];
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (k == agent) continue;
        if (mine > scores[k]) twice += 2;
        else if (mine == scores[k]) twice += 1;
    }
    return 0.5 * static_cast<double>(twice);
}

PaymentVector borda_payoffs(std::span<const double> scores, double scale)
{
    if (!(scale >= 0.0)) throw DomainError("Borda scale must be nonnegative");
    const std::size_t n = scores.size();
    // Rank by sorting, then give each tie group the average of its rank counts.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    PaymentVector p;
    p.values.assign(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        // Each member beats the i agents below and ties with j-i-1 others.
        const double beaten = static_cast<double>(i) + 0.5 * static_cast<double>(j - i - 1);
        for (std::size_t k = i; k < j; ++k) p.values[order[k]] = scale * beaten;
        i = j;
    }
    p.total = sum(p.values);
    return p;
}

PaymentVector winner_take_all(std::span<const double> scores, double prize, Rng& rng)
{
    if (!(prize >= 0.0)) throw DomainError("prize must be nonnegative");
    PaymentVector p;
    p.values.assign(scores.size(), 0.0);
    if (scores.empty()) return p;
    const double best = *std::max_element(scores.begin(), scores.end());
    std::vector<std::size_t> top;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] == best) top.push_back(i);
    p.values[top[rng.below(top.size())]] = prize;
    p.total = prize;
    return p;
}

std::vector<double> borda_beaten_differences(const IecConfig& config, const Measurement& measurement, double xi,
                                             const CalibrationOptions& options, Seed seed)
{
    if (!(xi > 0.0 && xi <= 1.0)) throw DomainError("target effort must be in (0,1]");
    if (!(options.deviation > 0.0 && options.deviation < xi))
        throw DomainError("deviation must lie in (0, xi)");
    if (options.replicates == 0) throw ConfigError("calibration needs at least one replicate");
    if (options.deviating_agent >= config.num_agents) throw ConfigError("deviating agent out of range");
    measurement.validate();

    const ReplicateSampler sampler(config, seed);
    const auto symmetric = EffortProfile::symmetric(config.num_agents, xi);
    const auto deviated =
        EffortProfile::deviation(config.num_agents, xi, options.deviating_agent, xi - options.deviation);
    const bool paired = options.paired_sampling;

    return map_indices<double>(options.replicates, options.execution, [&](std::size_t r) {
        const Instance base = sampler.instance(r, symmetric, "instance");
        const Instance dev = sampler.instance(r, deviated, paired ? "instance" : "deviated");
        Rng m_base = sampler.rng(r, "measurement");
        Rng m_dev = sampler.rng(r, paired ? "measurement" : "measurement-deviated");
        const auto s_base = evaluate(measurement, base, m_base);
        const auto s_dev = evaluate(measurement, dev, m_dev);
        return borda_beaten(s_base.values, options.deviating_agent) -
               borda_beaten(s_dev.values, options.deviating_agent);
    });
}

CalibrationResult finish_calibration(const IecConfig& config, double xi, double derivative, double derivative_stderr,
                                     std::size_t replicates)
{
    if (!(derivative > 0.0))
        throw CalibrationError("estimated rank derivative " + std::to_string(derivative) +
                               " is not positive: the measurement does not reward effort at this level");
    CalibrationResult c;
    c.replicates = replicates;
    c.derivative_estimate = derivative;
    c.derivative_stderr = derivative_stderr;
    c.low_confidence = derivative < 2.0 * derivative_stderr;
    c.borda_scale = cost_derivative(config, xi) / derivative;
    const double n = static_cast<double>(config.num_agents);
    const double optimal = c.borda_scale * n * (n - 1.0) / 2.0;
    c.ir_bound = n * cost(config, xi);
    c.ir_binding = optimal < c.ir_bound;
    c.total_payment = std::max(optimal, c.ir_bound);
    c.total_payment_stderr = c.ir_binding ? 0.0 : optimal * derivative_stderr / derivative;
    return c;
}

CalibrationResult calibrate_borda(const IecConfig& config, const Measurement& measurement, double xi,
                                  const CalibrationOptions& options, Seed seed)
{
    const auto diffs = borda_beaten_differences(config, measurement, xi, options, seed);
    const auto s = summarize(diffs);
    return finish_calibration(config, xi, s.mean / options.deviation, s.stderr_mean / options.deviation,
                              diffs.size());
}

}  // namespace scelab
