#include "mfl/lab/fit.hpp"

#include <cmath>
#include <string>

#include "mfl/core/errors.hpp"

namespace mfl::lab {

SlopeFit fit_slope(const std::vector<double>& parameters, const std::vector<double>& errors) {
  if (parameters.size() != errors.size()) throw InvalidArgument("fit_slope: parameter and error counts differ");
  const int n = static_cast<int>(errors.size());
  if (n < 4) throw InvalidArgument("fit_slope needs at least 4 points, got " + std::to_string(n));
  double sx = 0.0, sy = 0.0;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (!(parameters[i] > 0.0)) throw InvalidArgument("fit_slope: parameters must be positive");
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i]))
      throw InvalidArgument("fit_slope: errors must be positive and finite (floor them at the quadrature tolerance)");
    x[i] = std::log(parameters[i]);
    y[i] = std::log(errors[i]);
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_slope: parameters are all equal");
  SlopeFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r = 0.0;
  for (int i = 0; i < n; ++i) r += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.residual = std::sqrt(r / n);
  return f;
}

}  // namespace mfl::lab
