#pragma once

// Spot Check Equivalence: the spot-checking ratio whose measure matches a
// given measurement's measure, found by binary search over a grid of
// checking ratios with linear interpolation between neighbours.

#include "scelab/iec.hpp"
#include "scelab/measurements.hpp"
#include "scelab/metrics.hpp"
#include "scelab/rng.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace scelab {

enum class Clamp { none, low, high };
std::string to_string(Clamp c);

struct CurvePoint {
    double check_ratio = 0.0;
    double value = 0.0;
    double stderr_value = 0.0;
};

struct SceResult {
    double sce_percent = 0.0;
    MetricKind metric = MetricKind::measurement_integrity;
    double f_target = 0.0;
    double f_target_stderr = 0.0;
    std::vector<CurvePoint> f_curve;  // every grid point evaluated, ascending
    double step = 5.0;
    Clamp clamped = Clamp::none;
    bool degenerate_interval = false;  // neighbours had equal (or inverted) values
    std::size_t probes = 0;            // distinct grid evaluations
};

/// Measure of SC(X) as a function of the checking percentage X.
using SpotCheckEvaluator = std::function<MetricEstimate(double check_ratio)>;

struct SearchOptions {
    double step = 5.0;
    /// Evaluate every grid point first, then search the cached curve.
    bool full_grid = false;
    /// Replace the curve by its isotonic (non-decreasing) fit before
    /// searching. Implies full_grid.
    bool isotonic = false;
};

/// Grid binary search for the largest grid ratio whose measure is below
/// f_target, refined by interpolating towards the next grid point.
/// Evaluation failures are rethrown as Error naming the grid point.
SceResult sce_binary_search(double f_target, const SpotCheckEvaluator& f_sc, const SearchOptions& options);

/// Memoizes an evaluator so several measurements can share one SC curve.
/// Safe to call concurrently; the evaluator must be a pure function of X.
class CurveCache {
public:
    explicit CurveCache(SpotCheckEvaluator raw) : raw_(std::move(raw)) {}
    MetricEstimate operator()(double check_ratio);
    std::size_t size() const;

private:
    SpotCheckEvaluator raw_;
    mutable std::mutex mutex_;
    std::map<double, MetricEstimate> cache_;
};

struct SceOptions {
    SearchOptions search;
    std::size_t replicates = 500;  // MI replicates per evaluation
    SensitivityOptions sensitivity;
    /// Evaluate the target measurement on an independent seed instead of
    /// the common base seed shared with the SC grid.
    bool independent_target = false;
    Execution execution = Execution::parallel;
};

/// Evaluator for SC(X) measurement integrity; SC(0) is pinned to 0.
SpotCheckEvaluator mi_curve(const IecConfig& config, double xi, std::size_t replicates, Seed seed,
                            Execution exec = Execution::parallel);
/// Evaluator for SC(X) sensitivity proxy; SC(0) is pinned to 0.
SpotCheckEvaluator sensitivity_curve(const IecConfig& config, double xi, const SensitivityOptions& options, Seed seed);

/// Seed used for the target measurement under independent_target.
Seed target_seed(Seed seed, const SceOptions& options);

SceResult sce_mi(const IecConfig& config, const Measurement& measurement, double xi, const SceOptions& options,
                 Seed seed, CurveCache* shared_curve = nullptr);
SceResult sce_sensitivity(const IecConfig& config, const Measurement& measurement, double xi,
                          const SceOptions& options, Seed seed, CurveCache* shared_curve = nullptr);

}  // namespace scelab
