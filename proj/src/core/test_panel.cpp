#include "mfl/core/test_panel.hpp"

#include <algorithm>
#include <cmath>

#include "mfl/core/errors.hpp"

namespace mfl {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

double TestFunction::operator()(double x, double v) const {
  return value(std::span<const double>(&x, 1), std::span<const double>(&v, 1));
}

std::vector<std::string> TestFunctionPanel::ids() const {
  std::vector<std::string> out;
  for (const auto& f : functions) out.push_back(f.id);
  return out;
}

TestFunction gaussian_bump(int dim, double cx, double cv, double s, std::string id) {
  if (!(s > 0.0)) throw InvalidArgument("bump width must be positive");
  const double k = 0.5 / (s * s);
  TestFunction f;
  f.id = std::move(id);
  f.dim = dim;
  f.value = [=](std::span<const double> x, std::span<const double> v) {
    double r = 0.0;
    for (int a = 0; a < dim; ++a) r += (x[a] - cx) * (x[a] - cx) + (v[a] - cv) * (v[a] - cv);
    return std::exp(-k * r);
  };
  f.gradient = [=](std::span<const double> x, std::span<const double> v, std::span<double> gx,
                   std::span<double> gv) {
    double r = 0.0;
    for (int a = 0; a < dim; ++a) r += (x[a] - cx) * (x[a] - cx) + (v[a] - cv) * (v[a] - cv);
    const double e = std::exp(-k * r);
    for (int a = 0; a < dim; ++a) {
      gx[a] = -2.0 * k * (x[a] - cx) * e;
      gv[a] = -2.0 * k * (v[a] - cv) * e;
    }
  };
  f.sup_norm = 1.0;
  f.sup_gradient = std::exp(-0.5) / s;
  if (dim == 1)
    f.separable.push_back({[=](double x) { return std::exp(-k * (x - cx) * (x - cx)); },
                           [=](double v) { return std::exp(-k * (v - cv) * (v - cv)); }});
  return f;
}

TestFunction gaussian_moment(int dim, int px, int pv, double cutoff, std::string id) {
  if (!(cutoff > 0.0)) throw InvalidArgument("moment cutoff must be positive");
  const double k = 0.5 / (cutoff * cutoff);
  TestFunction f;
  f.id = std::move(id);
  f.dim = dim;
  auto gauss = [=](std::span<const double> x, std::span<const double> v) {
    double r = 0.0;
    for (int a = 0; a < dim; ++a) r += x[a] * x[a] + v[a] * v[a];
    return std::exp(-k * r);
  };
  f.value = [=](std::span<const double> x, std::span<const double> v) {
    return ipow(x[0], px) * ipow(v[0], pv) * gauss(x, v);
  };
  f.gradient = [=](std::span<const double> x, std::span<const double> v, std::span<double> gx,
                   std::span<double> gv) {
    const double g = gauss(x, v);
    const double m = ipow(x[0], px) * ipow(v[0], pv);
    for (int a = 0; a < dim; ++a) {
      gx[a] = -2.0 * k * x[a] * m * g;
      gv[a] = -2.0 * k * v[a] * m * g;
    }
    if (px > 0) gx[0] += px * ipow(x[0], px - 1) * ipow(v[0], pv) * g;
    if (pv > 0) gv[0] += pv * ipow(x[0], px) * ipow(v[0], pv - 1) * g;
  };
  // x^p e^{-x^2/(2c^2)} peaks at x^2 = p c^2.
  auto peak = [&](int p) { return p == 0 ? 1.0 : std::pow(p * cutoff * cutoff, 0.5 * p) * std::exp(-0.5 * p); };
  f.sup_norm = peak(px) * peak(pv);
  // The gradient sup is attained in the (x0, v0) plane; probe it densely.
  double best = 0.0;
  const double R = 6.0 * cutoff;
  const int n = 241;
  std::vector<double> xs(dim, 0.0), vs(dim, 0.0), gx(dim), gv(dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      xs[0] = -R + 2.0 * R * i / (n - 1);
      vs[0] = -R + 2.0 * R * j / (n - 1);
      f.gradient(xs, vs, gx, gv);
      best = std::max(best, std::hypot(gx[0], gv[0]));
    }
  f.sup_gradient = best;
  if (dim == 1)
    f.separable.push_back({[=](double x) { return ipow(x, px) * std::exp(-k * x * x); },
                           [=](double v) { return ipow(v, pv) * std::exp(-k * v * v); }});
  return f;
}

TestFunction constant_function(int dim, double c) {
  TestFunction f;
  f.id = "const";
  f.dim = dim;
  f.value = [c](std::span<const double>, std::span<const double>) { return c; };
  f.gradient = [dim](std::span<const double>, std::span<const double>, std::span<double> gx,
                     std::span<double> gv) {
    for (int a = 0; a < dim; ++a) gx[a] = gv[a] = 0.0;
  };
  f.sup_norm = std::abs(c);
  if (dim == 1) f.separable.push_back({[c](double) { return c; }, [](double) { return 1.0; }});
  return f;
}

TestFunction velocity_function(int dim) {
  TestFunction f;
  f.id = "v";
  if (dim == 1) f.separable.push_back({[](double) { return 1.0; }, [](double v) { return v; }});
  f.dim = dim;
  f.value = [](std::span<const double>, std::span<const double> v) { return v[0]; };
  f.gradient = [dim](std::span<const double>, std::span<const double>, std::span<double> gx,
                     std::span<double> gv) {
    for (int a = 0; a < dim; ++a) gx[a] = gv[a] = 0.0;
    gv[0] = 1.0;
  };
  f.sup_norm = f.sup_gradient = INFINITY;
  return f;
}

TestFunction position_square_function(int dim) {
  TestFunction f;
  f.id = "xx";
  if (dim == 1) f.separable.push_back({[](double x) { return x * x; }, [](double) { return 1.0; }});
  f.dim = dim;
  f.value = [](std::span<const double> x, std::span<const double>) { return x[0] * x[0]; };
  f.gradient = [dim](std::span<const double> x, std::span<const double>, std::span<double> gx,
                     std::span<double> gv) {
    for (int a = 0; a < dim; ++a) gx[a] = gv[a] = 0.0;
    gx[0] = 2.0 * x[0];
  };
  f.sup_norm = f.sup_gradient = INFINITY;
  return f;
}

TestFunctionPanel default_test_panel(int dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("test panel dimension must be 1, 2 or 3");
  TestFunctionPanel p;
  p.dim = dim;
  // exp(-|x|^2 - |v|^2)
  p.functions.push_back(gaussian_bump(dim, 0.0, 0.0, std::sqrt(0.5), "gauss_unit"));
  p.functions.push_back(gaussian_bump(dim, 0.5, 0.2, 0.7, "gauss_right"));
  p.functions.push_back(gaussian_bump(dim, -0.5, -0.1, 0.8, "gauss_left"));
  p.functions.push_back(gaussian_bump(dim, 0.3, 0.1, 0.5, "gauss_narrow"));
  p.functions.push_back(gaussian_moment(dim, 1, 0, 1.0, "mom_x"));
  p.functions.push_back(gaussian_moment(dim, 0, 1, 1.0, "mom_v"));
  p.functions.push_back(gaussian_moment(dim, 2, 0, 1.0, "mom_xx"));
  p.functions.push_back(gaussian_moment(dim, 0, 2, 1.0, "mom_vv"));
  p.functions.push_back(gaussian_moment(dim, 1, 1, 1.0, "mom_xv"));
  return p;
}

}  // namespace mfl
