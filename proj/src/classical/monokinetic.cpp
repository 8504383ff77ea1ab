#include "mfl/classical/monokinetic.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "mfl/core/errors.hpp"

namespace mfl::classical {

const char* to_string(InitMode m) {
  switch (m) {
    case InitMode::monte_carlo: return "monte_carlo";
    case InitMode::quadrature: return "quadrature";
    case InitMode::quantile: return "quantile";
  }
  return "unknown";
}

InitMode init_mode_from_string(const std::string& name) {
  if (name == "monte_carlo") return InitMode::monte_carlo;
  if (name == "quadrature") return InitMode::quadrature;
  if (name == "quantile") return InitMode::quantile;
  throw InvalidArgument("unknown init mode '" + name + "'");
}

namespace {

int per_axis(int count, int dim) {
  const int n = static_cast<int>(std::lround(std::pow(count, 1.0 / dim)));
  int p = 1;
  for (int a = 0; a < dim; ++a) p *= n;
  if (p != count)
    throw InvalidArgument("grid initialization needs count = n^d, got " + std::to_string(count));
  return n;
}

}  // namespace

EnsembleState monokinetic_init(const GaussianDensity& rho, const PhaseProfile& sigma, int count,
                               const MonokineticOptions& opt) {
  rho.validate();
  const int d = rho.dim();
  EnsembleState s = EnsembleState::uniform(count, d);

  switch (opt.mode) {
    case InitMode::monte_carlo: {
      if (std::abs(rho.mass - 1.0) > 1e-8) throw InvalidArgument("density is not normalized");
      std::mt19937_64 rng(opt.seed);
      for (int i = 0; i < count; ++i) rho.sample(rng, s.position(i));
      break;
    }
    case InitMode::quantile: {
      if (std::abs(rho.mass - 1.0) > 1e-8) throw InvalidArgument("density is not normalized");
      const int n = per_axis(count, d);
      for (int i = 0; i < count; ++i) {
        int rem = i;
        for (int a = d - 1; a >= 0; --a) {
          s.positions[i * d + a] = rho.quantile(a, (rem % n + 0.5) / n);
          rem /= n;
        }
      }
      break;
    }
    case InitMode::quadrature: {
      const int n = per_axis(count, d);
      std::vector<double> dx(d), lo(d);
      double cell = 1.0;
      for (int a = 0; a < d; ++a) {
        dx[a] = 2.0 * opt.box_sigmas * rho.stddev[a] / n;
        lo[a] = rho.center[a] - opt.box_sigmas * rho.stddev[a] + 0.5 * dx[a];
        cell *= dx[a];
      }
      double total = 0.0;
      for (int i = 0; i < count; ++i) {
        int rem = i;
        for (int a = d - 1; a >= 0; --a) {
          s.positions[i * d + a] = lo[a] + (rem % n) * dx[a];
          rem /= n;
        }
        s.weights[i] = rho.pdf(s.position(i)) * cell;
        total += s.weights[i];
      }
      if (std::abs(total - 1.0) > 1e-8)
        throw InvalidArgument("density integrates to " + std::to_string(total) + " under quadrature, expected 1");
      for (double& w : s.weights) w /= total;
      break;
    }
  }
  for (int i = 0; i < count; ++i) sigma.gradient(s.position(i), s.velocity(i));
  s.validate();
  return s;
}

}  // namespace mfl::classical
