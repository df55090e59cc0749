#pragma once

#include <span>

namespace ctv {

struct TTestResult {
    double t = 0;
    double dof = 0;
    double p = 1;  // two-tailed
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Both variances zero: p = 1 if the means are equal, else p = 0.
// Throws std::invalid_argument when either sample has fewer than 2 values.
TTestResult welch_t(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);

}  // namespace ctv
