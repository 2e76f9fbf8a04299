#include "scelab/oracles.hpp"

#include "scelab/error.hpp"
#include "scelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace scelab {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

void GaussianSurrogate::validate() const
{
    if (!(sigma_q > 0.0)) throw ConfigError("sigma_q must be positive");
    if (!(score_noise >= 0.0)) throw ConfigError("score_noise must be nonnegative");
    if (!std::isfinite(slope)) throw ConfigError("slope must be finite");
}

double example1_payoff(double xi, double sigma)
{
    return std::max(2.0 * xi * xi, 4.0 * xi * std::sqrt(std::numbers::pi * (sigma * sigma + 1.0)));
}

double example1_sensitivity(double sigma) { return 1.0 / std::sqrt(sigma * sigma + 1.0); }

Example1Estimate example1_simulate(double xi, double sigma, std::size_t replicates, Seed seed, double h,
                                   Execution exec)
{
    if (replicates == 0) throw ConfigError("example1_simulate needs at least one replicate");
    if (!(xi >= 0.0) || !(sigma >= 0.0)) throw DomainError("example1_simulate: xi and sigma must be nonnegative");
    if (!(h > 0.0)) throw ConfigError("finite-difference half-width must be positive");

    // Deviator's score is e + N(0, 1 + sigma^2).
    const double spread = std::sqrt(1.0 + sigma * sigma);
    const auto diffs = map_indices<double>(replicates, exec, [&](std::size_t r) {
        Rng rng(seed.child(r));
        const double q = xi + rng.normal();
        const double s = q + sigma * rng.normal();
        const double up = normal_cdf((xi + h - s) / spread);
        const double down = normal_cdf((xi - h - s) / spread);
        return (up - down) / (2.0 * h);
    });
    const auto d = summarize(diffs);

    Example1Estimate e;
    e.replicates = replicates;
    e.win_derivative = d.mean;
    e.win_derivative_stderr = d.stderr_mean;
    if (!(d.mean > 0.0)) throw CalibrationError("example1_simulate: win-probability derivative is not positive");
    e.prize = 2.0 * xi / d.mean;
    const double floor = 2.0 * xi * xi;
    e.ir_binding = e.prize < floor;
    e.total_payment = std::max(e.prize, floor);
    e.low_confidence = replicates < 2 || d.mean < 2.0 * d.stderr_mean;
    return e;
}

Theorem1Check theorem1_check(const GaussianSurrogate& surrogate, double xi, std::size_t n_agents,
                             std::size_t replicates, Seed seed, double h, Execution exec)
{
    surrogate.validate();
    if (n_agents < 2) throw ConfigError("theorem1_check needs at least two agents");
    if (replicates == 0) throw ConfigError("theorem1_check needs at least one replicate");
    if (!(h > 0.0)) throw ConfigError("finite-difference half-width must be positive");

    struct Rep {
        double corr = 0.0;
        bool defined = false;
        double sum = 0.0, sum_sq = 0.0;
        double mean_slope = 0.0;  // (mean s at xi+h - mean s at xi-h) / 2h
    };
    const auto n = static_cast<double>(n_agents);
    const auto reps = map_indices<Rep>(replicates, exec, [&](std::size_t r) {
        Rng rng(seed.child(r));
        std::vector<double> q(n_agents), s(n_agents);
        Rep out;
        double up = 0.0, down = 0.0;
        for (std::size_t i = 0; i < n_agents; ++i) {
            const double zq = rng.normal();
            const double zs = rng.normal();
            q[i] = xi + surrogate.sigma_q * zq;
            s[i] = surrogate.slope * q[i] + surrogate.score_noise * zs;
            up += surrogate.slope * (xi + h + surrogate.sigma_q * zq) + surrogate.score_noise * zs;
            down += surrogate.slope * (xi - h + surrogate.sigma_q * zq) + surrogate.score_noise * zs;
            out.sum += s[i];
            out.sum_sq += s[i] * s[i];
        }
        out.mean_slope = (up - down) / n / (2.0 * h);
        try {
            out.corr = pearson(q, s);
            out.defined = true;
        } catch (const UndefinedCorrelation&) {
        }
        return out;
    });

    std::vector<double> corrs, slopes;
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& r : reps) {
        if (r.defined) corrs.push_back(r.corr);
        slopes.push_back(r.mean_slope);
        sum += r.sum;
        sum_sq += r.sum_sq;
    }
    const double total = n * static_cast<double>(replicates);
    const double mean_s = sum / total;
    const double var_s = (sum_sq - total * mean_s * mean_s) / (total - 1.0);
    if (!(var_s > 0.0)) throw EstimationError("theorem1_check: score sd is zero");
    if (corrs.empty()) throw UndefinedCorrelation("theorem1_check: scores constant in every replicate");

    const auto c = summarize(corrs);
    Theorem1Check t;
    t.replicates = corrs.size();
    t.mi_estimate = c.mean;
    t.mi_stderr = c.stderr_mean;
    t.delta = summarize(slopes).mean / std::sqrt(var_s);
    t.delta_times_sigma_q = t.delta * surrogate.sigma_q;
    t.residual = std::abs(t.mi_estimate - t.delta_times_sigma_q);
    return t;
}

}  // namespace scelab
