#pragma once

// Closed forms and small Monte-Carlo harnesses used to validate the
// simulation machinery: the two-agent Gaussian winner-take-all game, and the
// Gaussian surrogate relating correlation to sensitivity.

#include "scelab/parallel.hpp"
#include "scelab/rng.hpp"

#include <cstddef>

namespace scelab {

struct GaussianSurrogate {
    double sigma_q = 1.0;      // quality noise
    double score_noise = 0.0;  // conditional score noise
    double slope = 1.0;        // mean score given quality is slope * q
    void validate() const;
};

/// Total prize needed to make effort xi an equilibrium of the two-agent
/// winner-take-all game with Normal(e,1) quality, Normal(q, sigma^2) score
/// and cost e^2, floored at the participation bound 2 xi^2.
double example1_payoff(double xi, double sigma);

/// Correlation of score and quality in the same game: 1/sqrt(sigma^2+1).
double example1_sensitivity(double sigma);

struct Example1Estimate {
    double total_payment = 0.0;
    double prize = 0.0;  // before the participation floor
    double win_derivative = 0.0;
    double win_derivative_stderr = 0.0;
    bool ir_binding = false;
    bool low_confidence = false;
    std::size_t replicates = 0;
};

/// Monte-Carlo version of example1_payoff. Each replicate draws the
/// opponent's quality and score; the deviator's win probability at effort
/// xi +/- h is averaged over those draws (the deviator's own noise enters
/// through the Normal CDF), and the prize solves prize * dP/de = 2 xi.
/// Throws CalibrationError if the derivative estimate is not positive.
Example1Estimate example1_simulate(double xi, double sigma, std::size_t replicates, Seed seed, double h = 0.01,
                                   Execution exec = Execution::parallel);

struct Theorem1Check {
    double mi_estimate = 0.0;
    double mi_stderr = 0.0;
    double delta = 0.0;  // (d mu_s / d e) / sigma_s
    double delta_times_sigma_q = 0.0;
    double residual = 0.0;
    std::size_t replicates = 0;
};

/// Mean sample correlation of (q, s) over replicates of n_agents draws,
/// against delta * sigma_q where delta is estimated by a common-random-number
/// central difference of the mean score in effort over the pooled score sd.
Theorem1Check theorem1_check(const GaussianSurrogate& surrogate, double xi, std::size_t n_agents,
                             std::size_t replicates, Seed seed, double h = 0.01,
                             Execution exec = Execution::parallel);

}  // namespace scelab
