#include "mfl/classical/pairing.hpp"

#include <vector>

#include "mfl/classical/integrator.hpp"
#include "mfl/core/errors.hpp"

namespace mfl::classical {

double empirical_pairing(const EnsembleState& s, const TestFunction& F) {
  double acc = 0.0;
  for (int i = 0; i < s.count; ++i) acc += s.weights[i] * F(s.position(i), s.velocity(i));
  return acc;
}

double weak_vlasov_rhs(const EnsembleState& s, const TwoBodyPotential& phi, const TestFunction& F,
                       ThreadPool* pool) {
  const std::vector<double> E = mean_field_force(s, phi, pool);
  std::vector<double> gx(s.dim), gv(s.dim);
  double acc = 0.0;
  for (int i = 0; i < s.count; ++i) {
    F.gradient(s.position(i), s.velocity(i), gx, gv);
    double t = 0.0;
    for (int a = 0; a < s.dim; ++a) t += s.velocities[i * s.dim + a] * gx[a] + E[i * s.dim + a] * gv[a];
    acc += s.weights[i] * t;
  }
  return acc;
}

double pair_marginal_pairing(const EnsembleState& s, const TestFunction& F1, const TestFunction& F2) {
  if (s.count < 2) throw InvalidArgument("pair marginal needs at least two particles");
  double a = 0.0, b = 0.0, ab = 0.0, w2 = 0.0;
  for (int i = 0; i < s.count; ++i) {
    const double w = s.weights[i];
    const double f1 = F1(s.position(i), s.velocity(i));
    const double f2 = F2(s.position(i), s.velocity(i));
    a += w * f1;
    b += w * f2;
    ab += w * w * f1 * f2;
    w2 += w * w;
  }
  return (a * b - ab) / (1.0 - w2);
}

}  // namespace mfl::classical
