#include "mfl/classical/pair_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mfl/core/errors.hpp"

namespace mfl::kernels {

namespace {

// Radial profile g(s), s = |r|^2, with grad phi = 2 g' r and
// Hess phi = 2 g' I + 4 g'' r r^T.
struct Gauss {
  double A, k;
  double g(double s) const { return A * std::exp(-k * s); }
  // returns 2g', 4g'' sharing one exponential
  void d(double s, double& g1, double& g2) const {
    const double e = A * std::exp(-k * s);
    g1 = -2.0 * k * e;
    g2 = 4.0 * k * k * e;
  }
  double g1(double s) const { return -2.0 * k * A * std::exp(-k * s); }
};

struct Harmonic {
  double c;
  double g(double s) const { return 0.5 * c * s; }
  void d(double, double& g1, double& g2) const {
    g1 = c;
    g2 = 0.0;
  }
  double g1(double) const { return c; }
};

template <class F>
auto dispatch(const TwoBodyPotential& phi, F&& f) {
  switch (phi.kind()) {
    case PotentialKind::gaussian: {
      const double w = phi.width();
      return f(Gauss{phi.amplitude(), 0.5 / (w * w)});
    }
    case PotentialKind::harmonic: return f(Harmonic{phi.amplitude()});
    default: return f(Harmonic{0.0});
  }
}

void check(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
           std::span<const double> sources, std::span<const double> weights) {
  if (phi.dim() != dim) throw InvalidArgument("potential dimension does not match the ensemble");
  if (targets.size() % dim || sources.size() != weights.size() * dim)
    throw InvalidArgument("pair kernel: array sizes do not match");
}

// Sources transposed to one contiguous array per axis.
struct Soa {
  std::vector<double> axis[3];
  Soa(std::span<const double> s, int dim) {
    const size_t n = s.size() / dim;
    for (int a = 0; a < dim; ++a) {
      axis[a].resize(n);
      for (size_t j = 0; j < n; ++j) axis[a][j] = s[j * dim + a];
    }
  }
};

template <int D, class P>
void field_rows(const P& p, const double* t, const Soa& src, const double* w, size_t ns, double* out,
                size_t b, size_t e) {
  for (size_t i = b; i < e; ++i) {
    double acc[3] = {0.0, 0.0, 0.0};
    double ti[3];
    for (int a = 0; a < D; ++a) ti[a] = t[i * D + a];
    if constexpr (D == 1) {
      const double* sx = src.axis[0].data();
      double s0 = 0.0;
      for (size_t j = 0; j < ns; ++j) {
        const double r = ti[0] - sx[j];
        s0 += w[j] * p.g1(r * r) * r;
      }
      acc[0] = s0;
    } else {
      for (size_t j = 0; j < ns; ++j) {
        double r[3], s = 0.0;
        for (int a = 0; a < D; ++a) {
          r[a] = ti[a] - src.axis[a][j];
          s += r[a] * r[a];
        }
        const double f = w[j] * p.g1(s);
        for (int a = 0; a < D; ++a) acc[a] += f * r[a];
      }
    }
    for (int a = 0; a < D; ++a) out[i * D + a] = -acc[a];
  }
}

template <int D, class P>
void jacobian_rows(const P& p, const double* t, const Soa& src, const double* w, size_t ns,
                   double* out, size_t b, size_t e) {
  for (size_t i = b; i < e; ++i) {
    double acc[9] = {0};
    double ti[3];
    for (int a = 0; a < D; ++a) ti[a] = t[i * D + a];
    for (size_t j = 0; j < ns; ++j) {
      double r[3], s = 0.0;
      for (int a = 0; a < D; ++a) {
        r[a] = ti[a] - src.axis[a][j];
        s += r[a] * r[a];
      }
      double g1, g2;
      p.d(s, g1, g2);
      for (int a = 0; a < D; ++a)
        for (int c = 0; c < D; ++c) acc[a * D + c] += w[j] * (g2 * r[a] * r[c] + (a == c ? g1 : 0.0));
    }
    for (int q = 0; q < D * D; ++q) out[i * D * D + q] = -acc[q];
  }
}

template <int D, class P>
void potential_rows(const P& p, const double* t, const Soa& src, const double* w, size_t ns,
                    double* out, size_t b, size_t e) {
  for (size_t i = b; i < e; ++i) {
    double ti[3];
    for (int a = 0; a < D; ++a) ti[a] = t[i * D + a];
    double acc = 0.0;
    for (size_t j = 0; j < ns; ++j) {
      double s = 0.0;
      for (int a = 0; a < D; ++a) {
        const double r = ti[a] - src.axis[a][j];
        s += r * r;
      }
      acc += w[j] * p.g(s);
    }
    out[i] = acc;
  }
}

template <template <int, class> class Rows, class P, class... Args>
void by_dim(int dim, const P& p, Args... args) {
  switch (dim) {
    case 1: Rows<1, P>::run(p, args...); break;
    case 2: Rows<2, P>::run(p, args...); break;
    default: Rows<3, P>::run(p, args...); break;
  }
}

template <int D, class P>
struct FieldRows {
  static void run(const P& p, const double* t, const Soa* src, const double* w, size_t ns, double* out,
                  size_t b, size_t e) {
    field_rows<D>(p, t, *src, w, ns, out, b, e);
  }
};
template <int D, class P>
struct JacobianRows {
  static void run(const P& p, const double* t, const Soa* src, const double* w, size_t ns, double* out,
                  size_t b, size_t e) {
    jacobian_rows<D>(p, t, *src, w, ns, out, b, e);
  }
};
template <int D, class P>
struct PotentialRows {
  static void run(const P& p, const double* t, const Soa* src, const double* w, size_t ns, double* out,
                  size_t b, size_t e) {
    potential_rows<D>(p, t, *src, w, ns, out, b, e);
  }
};

template <template <int, class> class Rows>
void run_rows(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
              std::span<const double> sources, std::span<const double> weights, double* out,
              ThreadPool* pool) {
  const Soa soa(sources, dim);
  const size_t nt = targets.size() / dim, ns = weights.size();
  dispatch(phi, [&](const auto& p) {
    parallel_for(pool, nt, [&](size_t b, size_t e, int) {
      by_dim<Rows>(dim, p, targets.data(), &soa, weights.data(), ns, out, b, e);
    });
    return 0;
  });
}

}  // namespace

void field(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
           std::span<const double> sources, std::span<const double> weights, std::span<double> out,
           ThreadPool* pool) {
  check(phi, dim, targets, sources, weights);
  if (phi.is_zero_force()) {
    std::fill(out.begin(), out.begin() + targets.size(), 0.0);
    return;
  }
  run_rows<FieldRows>(phi, dim, targets, sources, weights, out.data(), pool);
}

void field_jacobian(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
                    std::span<const double> sources, std::span<const double> weights,
                    std::span<double> out, ThreadPool* pool) {
  check(phi, dim, targets, sources, weights);
  if (phi.is_zero_force()) {
    std::fill(out.begin(), out.begin() + targets.size() * dim, 0.0);
    return;
  }
  run_rows<JacobianRows>(phi, dim, targets, sources, weights, out.data(), pool);
}

void potential(const TwoBodyPotential& phi, int dim, std::span<const double> targets,
               std::span<const double> sources, std::span<const double> weights,
               std::span<double> out, ThreadPool* pool) {
  check(phi, dim, targets, sources, weights);
  const size_t nt = targets.size() / dim;
  if (phi.is_zero_force()) {
    double total = 0.0;
    for (double w : weights) total += w;
    std::fill(out.begin(), out.begin() + nt, phi.profile(0.0) * total);
    return;
  }
  run_rows<PotentialRows>(phi, dim, targets, sources, weights, out.data(), pool);
}

double pair_energy(const TwoBodyPotential& phi, int dim, std::span<const double> x,
                   std::span<const double> weights, ThreadPool* pool) {
  check(phi, dim, x, x, weights);
  const size_t n = weights.size();
  std::vector<double> rows(n, 0.0);
  const Soa soa(x, dim);
  dispatch(phi, [&](const auto& p) {
    parallel_for(pool, n, [&](size_t b, size_t e, int) {
      for (size_t i = b; i < e; ++i) {
        double acc = 0.0;
        for (size_t j = i + 1; j < n; ++j) {
          double s = 0.0;
          for (int a = 0; a < dim; ++a) {
            const double r = x[i * dim + a] - soa.axis[a][j];
            s += r * r;
          }
          acc += weights[j] * p.g(s);
        }
        rows[i] = weights[i] * acc;
      }
    });
    return 0;
  });
  if (phi.kind() == PotentialKind::constant) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double tail = 0.0;
      for (size_t j = i + 1; j < n; ++j) tail += weights[j];
      acc += weights[i] * tail;
    }
    return phi.amplitude() * acc;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

void acceleration_jacobian(const TwoBodyPotential& phi, int dim, std::span<const double> x,
                           std::span<const double> weights, std::span<double> out, ThreadPool* pool) {
  check(phi, dim, x, x, weights);
  const size_t n = weights.size(), nd = n * dim;
  if (out.size() < nd * nd) throw InvalidArgument("acceleration_jacobian: output too small");
  std::fill(out.begin(), out.begin() + nd * nd, 0.0);
  if (phi.is_zero_force()) return;
  dispatch(phi, [&](const auto& p) {
    parallel_for(pool, n, [&](size_t b, size_t e, int) {
      for (size_t i = b; i < e; ++i) {
        double diag[9] = {0};
        for (size_t k = 0; k < n; ++k) {
          if (k == i) continue;
          double r[3], s = 0.0;
          for (int a = 0; a < dim; ++a) {
            r[a] = x[i * dim + a] - x[k * dim + a];
            s += r[a] * r[a];
          }
          double g1, g2;
          p.d(s, g1, g2);
          for (int a = 0; a < dim; ++a)
            for (int c = 0; c < dim; ++c) {
              const double h = weights[k] * (g2 * r[a] * r[c] + (a == c ? g1 : 0.0));
              out[(i * dim + a) * nd + k * dim + c] = h;
              diag[a * dim + c] -= h;
            }
        }
        for (int a = 0; a < dim; ++a)
          for (int c = 0; c < dim; ++c) out[(i * dim + a) * nd + i * dim + c] = diag[a * dim + c];
      }
    });
    return 0;
  });
}

}  // namespace mfl::kernels
