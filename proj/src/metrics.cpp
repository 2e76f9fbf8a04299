#include "scelab/metrics.hpp"

#include "scelab/error.hpp"
#include "scelab/sampling.hpp"

#include <cmath>

namespace scelab {

std::string to_string(MetricKind kind)
{
    switch (kind) {
    case MetricKind::measurement_integrity: return "mi";
    case MetricKind::sensitivity_proxy: return "sensitivity";
    case MetricKind::total_payment: return "total_payment";
    }
    return "?";
}

void ManipulationSpec::validate() const
{
    if (!(replace_prob >= 0.0 && replace_prob <= 1.0)) throw ConfigError("replace_prob must be in [0,1]");
}

std::vector<std::optional<double>> integrity_per_replicate(const IecConfig& config, const Measurement& measurement,
                                                           double xi, std::size_t replicates, Seed seed,
                                                           Execution exec)
{
    if (replicates == 0) throw ConfigError("measurement integrity needs at least one replicate");
    measurement.validate();
    const ReplicateSampler sampler(config, seed);
    const auto profile = EffortProfile::symmetric(config.num_agents, xi);
    return map_indices<std::optional<double>>(replicates, exec, [&](std::size_t r) -> std::optional<double> {
        const Instance inst = sampler.instance(r, profile);
        Rng m_rng = sampler.rng(r, "measurement");
        const auto s = evaluate(measurement, inst, m_rng);
        const auto q = quality_vector(inst);
        try {
            return pearson(s.values, q.values);
        } catch (const UndefinedCorrelation&) {
            return std::nullopt;
        }
    });
}

MetricEstimate measurement_integrity(const IecConfig& config, const Measurement& measurement, double xi,
                                     std::size_t replicates, Seed seed, Execution exec)
{
    const auto per = integrity_per_replicate(config, measurement, xi, replicates, seed, exec);
    std::vector<double> defined;
    defined.reserve(per.size());
    for (const auto& v : per)
        if (v) defined.push_back(*v);
    if (defined.empty())
        throw UndefinedCorrelation("measurement integrity undefined: " + measurement.id() +
                                   " produced constant scores in every replicate");
    const auto s = summarize(defined);
    MetricEstimate e;
    e.kind = MetricKind::measurement_integrity;
    e.value = s.mean;
    e.stderr_value = s.stderr_mean;
    e.replicates = defined.size();
    e.dropped = per.size() - defined.size();
    return e;
}

SensitivityDetail sensitivity_detail(const IecConfig& config, const Measurement& measurement, double xi,
                                     const SensitivityOptions& options, Seed seed)
{
    options.manipulation.validate();
    measurement.validate();
    if (options.iterations == 0) throw ConfigError("sensitivity proxy needs at least one iteration");
    if (options.resample && options.batch == 0) throw ConfigError("batch must be positive");

    const std::size_t per_instance = options.resample ? options.batch : options.iterations;
    const std::size_t n_instances = (options.iterations + per_instance - 1) / per_instance;
    const ReplicateSampler sampler(config, seed);
    const auto profile = EffortProfile::symmetric(config.num_agents, xi);
    const std::size_t k = config.num_labels();
    const double p_replace = options.manipulation.replace_prob;

    struct Batch {
        std::vector<double> base_scores;
        std::vector<double> deltas;
    };
    const auto batches = map_indices<Batch>(n_instances, options.execution, [&](std::size_t b) {
        const Instance inst = sampler.instance(b, profile);
        const Seed m_seed = sampler.replicate_seed(b).child("measurement");
        Rng m_rng(m_seed);
        Batch out;
        out.base_scores = evaluate(measurement, inst, m_rng).values;

        const std::size_t first = b * per_instance;
        const std::size_t last = std::min(options.iterations, first + per_instance);
        Instance manipulated = inst;
        for (std::size_t t = first; t < last; ++t) {
            Rng it(seed.child("iteration").child(t));
            const auto agent = static_cast<AgentId>(it.below(config.num_agents));
            const auto& g = inst.g();
            for (EdgeId e = g.edge_begin(agent); e < g.edge_end(agent); ++e)
                if (it.bernoulli(p_replace)) manipulated.reports[e] = static_cast<Label>(it.below(k));
            // Same measurement randomness: only the agent's reports differ.
            Rng again(m_seed);
            const double after = evaluate(measurement, manipulated, again).values[agent];
            out.deltas.push_back(after - out.base_scores[agent]);
            for (EdgeId e = g.edge_begin(agent); e < g.edge_end(agent); ++e) manipulated.reports[e] = inst.reports[e];
        }
        return out;
    });

    std::vector<double> all_scores, all_deltas;
    for (const auto& b : batches) {
        all_scores.insert(all_scores.end(), b.base_scores.begin(), b.base_scores.end());
        all_deltas.insert(all_deltas.end(), b.deltas.begin(), b.deltas.end());
    }
    const auto score_summary = summarize(all_scores);
    const auto delta_summary = summarize(all_deltas);
    if (!(score_summary.sd > 0.0))
        throw EstimationError("sensitivity undefined: " + measurement.id() + " scores have zero spread");

    SensitivityDetail d;
    d.delta_mu = delta_summary.mean;
    d.delta_mu_stderr = delta_summary.stderr_mean;
    d.sigma_s = score_summary.sd;
    d.estimate.kind = MetricKind::sensitivity_proxy;
    d.estimate.value = std::abs(d.delta_mu) / d.sigma_s;
    d.estimate.stderr_value = d.delta_mu_stderr / d.sigma_s;
    d.estimate.replicates = all_deltas.size();
    return d;
}

MetricEstimate sensitivity_proxy(const IecConfig& config, const Measurement& measurement, double xi,
                                 const SensitivityOptions& options, Seed seed)
{
    return sensitivity_detail(config, measurement, xi, options, seed).estimate;
}

MetricEstimate total_payment(const IecConfig& config, const Measurement& measurement, double xi,
                             const CalibrationOptions& options, Seed seed)
{
    const auto c = calibrate_borda(config, measurement, xi, options, seed);
    MetricEstimate e;
    e.kind = MetricKind::total_payment;
    e.value = c.total_payment;
    e.stderr_value = c.total_payment_stderr;
    e.replicates = c.replicates;
    return e;
}

}  // namespace scelab
