#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mfl {

/// Smooth observable F(x, v) on one-particle phase space.
struct TestFunction {
  using Value = std::function<double(std::span<const double>, std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<const double>,
                                      std::span<double>, std::span<double>)>;

  std::string id;
  int dim = 1;
  Value value;
  /// Fills dF/dx and dF/dv.
  Gradient gradient;
  double sup_norm = 0.0;
  double sup_gradient = 0.0;
  /// Optional d = 1 factorization F(x, v) = sum_t X_t(x) V_t(v); lets phase-space
  /// quadratures reduce to one transform of each V_t.
  struct Term {
    std::function<double(double)> x_factor;
    std::function<double(double)> v_factor;
  };
  std::vector<Term> separable;

  double operator()(std::span<const double> x, std::span<const double> v) const { return value(x, v); }
  double operator()(double x, double v) const;
};

struct TestFunctionPanel {
  int dim = 1;
  std::vector<TestFunction> functions;

  std::size_t size() const { return functions.size(); }
  const TestFunction& operator[](std::size_t i) const { return functions[i]; }
  auto begin() const { return functions.begin(); }
  auto end() const { return functions.end(); }
  std::vector<std::string> ids() const;
};

/// exp(-|x - cx|^2/(2 s^2) - |v - cv|^2/(2 s^2)); cx, cv applied on every axis.
TestFunction gaussian_bump(int dim, double cx, double cv, double s, std::string id);

/// x0^px * v0^pv * exp(-(|x|^2 + |v|^2)/(2 c^2)).
TestFunction gaussian_moment(int dim, int px, int pv, double cutoff, std::string id);

TestFunction constant_function(int dim, double c = 1.0);
/// F(x, v) = v0 (unbounded; for sanity checks only).
TestFunction velocity_function(int dim);
/// F(x, v) = x0^2 (unbounded; for sanity checks only).
TestFunction position_square_function(int dim);

/// Nine functions: four Gaussians at different centers/widths and five
/// Gaussian-weighted moments x, v, x^2, v^2, xv.
TestFunctionPanel default_test_panel(int dim);

}  // namespace mfl
