#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scelab {

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation (n - 1)
    double stderr_mean = 0.0;
    std::size_t n = 0;
};

/// Mean and spread, accumulated in index order.
Summary summarize(std::span<const double> values);

/// Sample Pearson correlation. Throws UndefinedCorrelation when either
/// vector is constant, DomainError on length mismatch or n < 2.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
};

/// Ordinary least squares y = a + b x with the usual residual-based slope stderr.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Pool-adjacent-violators fit of a non-decreasing sequence (equal weights).
std::vector<double> isotonic_fit(std::span<const double> y);

/// Number of adjacent pairs (i, i+1) with y[i+1] < y[i].
std::size_t count_inversions(std::span<const double> y);

}  // namespace scelab
