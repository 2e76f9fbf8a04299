#include "scelab/equivalence.hpp"

#include "scelab/error.hpp"
#include "scelab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace scelab {

std::string to_string(Clamp c)
{
    switch (c) {
    case Clamp::none: return "none";
    case Clamp::low: return "low";
    case Clamp::high: return "high";
    }
    return "?";
}

SceResult sce_binary_search(double f_target, const SpotCheckEvaluator& f_sc, const SearchOptions& options)
{
    const double step = options.step;
    if (!(step > 0.0 && step <= 100.0)) throw ConfigError("SCE grid step must be in (0,100]");
    const auto top = static_cast<long>(std::floor(100.0 / step + 1e-9));

    std::map<long, MetricEstimate> probed;
    auto ratio = [&](long k) { return static_cast<double>(k) * step; };
    auto f = [&](long k) -> double {
        auto it = probed.find(k);
        if (it != probed.end()) return it->second.value;
        try {
            return probed.emplace(k, f_sc(ratio(k))).first->second.value;
        } catch (const std::exception& e) {
            throw Error("evaluating SC(" + std::to_string(ratio(k)) + ") failed: " + e.what());
        }
    };

    if (options.full_grid || options.isotonic) {
        for (long k = 0; k <= top; ++k) f(k);
        if (options.isotonic) {
            std::vector<double> values;
            for (const auto& [k, est] : probed) values.push_back(est.value);
            const auto fitted = isotonic_fit(values);
            std::size_t i = 0;
            for (auto& [k, est] : probed) est.value = fitted[i++];
        }
    }

    long low = 0, high = top, ans = -1;
    while (low <= high) {
        const long mid = (low + high) / 2;
        if (f(mid) < f_target) {
            ans = mid;
            low = mid + 1;
        } else {
            high = mid - 1;
        }
    }

    SceResult r;
    r.f_target = f_target;
    r.step = step;
    if (ans < 0) {
        r.sce_percent = 0.0;
        r.clamped = Clamp::low;
    } else if (ans == top) {
        r.sce_percent = ratio(top);
        r.clamped = Clamp::high;
    } else {
        const double lo = f(ans);
        const double hi = f(ans + 1);
        const double denom = hi - lo;
        if (!(denom > 0.0)) {
            r.sce_percent = ratio(ans);
            r.degenerate_interval = true;
        } else {
            const double x = ratio(ans) + step * (f_target - lo) / denom;
            r.sce_percent = std::clamp(x, ratio(ans), ratio(ans + 1));
        }
    }
    r.sce_percent = std::clamp(r.sce_percent, 0.0, 100.0);
    r.probes = probed.size();
    for (const auto& [k, est] : probed) r.f_curve.push_back({ratio(k), est.value, est.stderr_value});
    return r;
}

MetricEstimate CurveCache::operator()(double check_ratio)
{
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(check_ratio);
        if (it != cache_.end()) return it->second;
    }
    // Evaluated unlocked; a concurrent duplicate computes the same value.
    const MetricEstimate value = raw_(check_ratio);
    std::lock_guard lock(mutex_);
    return cache_.emplace(check_ratio, value).first->second;
}

std::size_t CurveCache::size() const
{
    std::lock_guard lock(mutex_);
    return cache_.size();
}

SpotCheckEvaluator mi_curve(const IecConfig& config, double xi, std::size_t replicates, Seed seed, Execution exec)
{
    return [=](double x) {
        if (x == 0.0) return MetricEstimate{0.0, 0.0, replicates, 0, MetricKind::measurement_integrity};
        return measurement_integrity(config, Measurement::spot_check(x), xi, replicates, seed, exec);
    };
}

SpotCheckEvaluator sensitivity_curve(const IecConfig& config, double xi, const SensitivityOptions& options, Seed seed)
{
    return [=](double x) {
        if (x == 0.0) return MetricEstimate{0.0, 0.0, options.iterations, 0, MetricKind::sensitivity_proxy};
        return sensitivity_proxy(config, Measurement::spot_check(x), xi, options, seed);
    };
}

Seed target_seed(Seed seed, const SceOptions& options)
{
    return options.independent_target ? seed.child("independent-target") : seed;
}

namespace {

SceResult search_with(const MetricEstimate& target, SpotCheckEvaluator raw, CurveCache* shared,
                      const SearchOptions& search, MetricKind kind)
{
    CurveCache local(std::move(raw));
    CurveCache& cache = shared ? *shared : local;
    auto r = sce_binary_search(target.value, [&](double x) { return cache(x); }, search);
    r.metric = kind;
    r.f_target_stderr = target.stderr_value;
    return r;
}

}  // namespace

SceResult sce_mi(const IecConfig& config, const Measurement& measurement, double xi, const SceOptions& options,
                 Seed seed, CurveCache* shared_curve)
{
    const auto target =
        measurement_integrity(config, measurement, xi, options.replicates, target_seed(seed, options), options.execution);
    return search_with(target, mi_curve(config, xi, options.replicates, seed, options.execution), shared_curve,
                       options.search, MetricKind::measurement_integrity);
}

SceResult sce_sensitivity(const IecConfig& config, const Measurement& measurement, double xi,
                          const SceOptions& options, Seed seed, CurveCache* shared_curve)
{
    auto sens = options.sensitivity;
    sens.execution = options.execution;
    const auto target = sensitivity_proxy(config, measurement, xi, sens, target_seed(seed, options));
    return search_with(target, sensitivity_curve(config, xi, sens, seed), shared_curve, options.search,
                       MetricKind::sensitivity_proxy);
}

}  // namespace scelab
