#pragma once

#include <span>
#include <vector>

namespace nambu {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
  std::vector<int> excluded_ks;
};

/// Least squares of log(residual) on log(k). Residuals below 1e-12 are
/// excluded; drop_smallest removes the smallest k first. Throws Error when
/// fewer than 4 points remain.
FitResult fit_rate(std::span<const int> ks, std::span<const double> residuals, bool drop_smallest = true);

inline constexpr double kZeroResidual = 1e-12;

}  // namespace nambu
