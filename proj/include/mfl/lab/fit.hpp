#pragma once

#include <vector>

namespace mfl::lab {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS of the log-space residuals.
  double residual = 0.0;
  int points = 0;
};

/// Ordinary least squares of log(error) on log(parameter). Needs at least
/// four points and strictly positive values.
SlopeFit fit_slope(const std::vector<double>& parameters, const std::vector<double>& errors);

}  // namespace mfl::lab
