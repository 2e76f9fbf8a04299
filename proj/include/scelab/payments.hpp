#pragma once

// Payment schemes and the Borda-count equilibrium calibration.

#include "scelab/iec.hpp"
#include "scelab/measurements.hpp"
#include "scelab/parallel.hpp"
#include "scelab/rng.hpp"

#include <span>
#include <vector>

namespace scelab {

struct PaymentVector {
    std::vector<double> values;
    double total = 0.0;
};

/// p_i = a * s_i + b. Throws LiabilityError if any payment is negative.
PaymentVector linear_pay(std::span<const double> scores, double a, double b);

/// Number of agents `agent` beats, ties counted as one half.
double borda_beaten(std::span<const double> scores, std::size_t agent);

/// p_i = scale * #beaten(i). Totals scale * n(n-1)/2 for any scores.
PaymentVector borda_payoffs(std::span<const double> scores, double scale);

/// Whole prize to the top score; ties broken uniformly at random.
PaymentVector winner_take_all(std::span<const double> scores, double prize, Rng& rng);

struct CalibrationOptions {
    double deviation = 0.1;  // the deviating agent plays xi - deviation
    std::size_t replicates = 500;
    /// Share every random draw between the symmetric and the deviated sample.
    bool paired_sampling = true;
    AgentId deviating_agent = 0;
    Execution execution = Execution::parallel;
};

struct CalibrationResult {
    double borda_scale = 0.0;
    double total_payment = 0.0;
    double total_payment_stderr = 0.0;  // zero when IR binds
    double derivative_estimate = 0.0;   // d E[#beaten] / d e at xi
    double derivative_stderr = 0.0;
    double ir_bound = 0.0;              // |I| * c(xi)
    bool ir_binding = false;
    bool low_confidence = false;        // derivative within 2 stderr of zero
    std::size_t replicates = 0;
};

/// Solves the first-order condition scale * dE[#beaten]/de = c'(xi) with a
/// backward finite difference of agent 0's expected rank, then floors the
/// total at the IR bound. Throws CalibrationError if the estimated
/// derivative is not positive.
CalibrationResult calibrate_borda(const IecConfig& config, const Measurement& measurement, double xi,
                                  const CalibrationOptions& options, Seed seed);

/// Per-replicate #beaten difference (symmetric minus deviated), in
/// replicate order. Exposed for convergence studies.
std::vector<double> borda_beaten_differences(const IecConfig& config, const Measurement& measurement, double xi,
                                             const CalibrationOptions& options, Seed seed);

/// Turns a mean derivative into the calibrated total payment.
CalibrationResult finish_calibration(const IecConfig& config, double xi, double derivative, double derivative_stderr,
                                     std::size_t replicates);

}  // namespace scelab
