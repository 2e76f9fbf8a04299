#pragma once

// Measures of a performance measurement: Measurement Integrity (expected
// score/quality correlation), the ground-truth-free sensitivity proxy, and
// the calibrated total payment.

#include "scelab/iec.hpp"
#include "scelab/measurements.hpp"
#include "scelab/parallel.hpp"
#include "scelab/payments.hpp"
#include "scelab/rng.hpp"
#include "scelab/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scelab {

enum class MetricKind { measurement_integrity, sensitivity_proxy, total_payment };

std::string to_string(MetricKind kind);

struct MetricEstimate {
    double value = 0.0;
    double stderr_value = 0.0;
    std::size_t replicates = 0;
    std::size_t dropped = 0;  // replicates without a defined value
    MetricKind kind = MetricKind::measurement_integrity;
};

/// Per-report manipulation standing in for an effort reduction: each report
/// of the selected agent is replaced by a uniform label with this probability.
/// Under the work/shirk mixture this equals lowering effort e to (1 - p) e.
struct ManipulationSpec {
    double replace_prob = 0.5;
    void validate() const;
};

/// Pearson correlation of scores and qualities on replicate `r`, or nothing
/// when the correlation is undefined (constant scores).
std::vector<std::optional<double>> integrity_per_replicate(const IecConfig& config, const Measurement& measurement,
                                                           double xi, std::size_t replicates, Seed seed,
                                                           Execution exec = Execution::parallel);

/// Mean correlation over replicates at the symmetric profile xi. Undefined
/// replicates are dropped and counted; throws UndefinedCorrelation if all are.
MetricEstimate measurement_integrity(const IecConfig& config, const Measurement& measurement, double xi,
                                     std::size_t replicates, Seed seed, Execution exec = Execution::parallel);

struct SensitivityOptions {
    ManipulationSpec manipulation;
    std::size_t iterations = 500;  // T
    /// Draw a fresh instance every `batch` iterations; otherwise one
    /// instance serves all iterations.
    bool resample = true;
    std::size_t batch = 10;
    Execution execution = Execution::parallel;
};

struct SensitivityDetail {
    MetricEstimate estimate;
    double delta_mu = 0.0;  // mean of s_i' - s_i, negative for sensible measurements
    double delta_mu_stderr = 0.0;
    double sigma_s = 0.0;
};

/// |delta_mu| / sigma_s. Throws EstimationError when sigma_s is zero.
SensitivityDetail sensitivity_detail(const IecConfig& config, const Measurement& measurement, double xi,
                                     const SensitivityOptions& options, Seed seed);
MetricEstimate sensitivity_proxy(const IecConfig& config, const Measurement& measurement, double xi,
                                 const SensitivityOptions& options, Seed seed);

/// Calibrated Borda total payment as a metric estimate.
MetricEstimate total_payment(const IecConfig& config, const Measurement& measurement, double xi,
                             const CalibrationOptions& options, Seed seed);

}  // namespace scelab
