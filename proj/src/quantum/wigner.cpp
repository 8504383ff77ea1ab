#include "mfl/quantum/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "mfl/core/errors.hpp"

namespace mfl::quantum {

namespace {

struct Setup {
  int n = 0, M = 0, stride = 1;
  double dx = 0.0, dv = 0.0, h = 1.0, scale = 0.0;
  int hull_lo = 0, hull_hi = -1;
};

Setup make_setup(const SpatialGrid& grid, double h, const std::vector<double>& density, const WignerOptions& o) {
  if (grid.dim != 1 || !grid.periodic) throw InvalidArgument("Wigner transform needs a periodic 1-D grid");
  Setup s;
  s.n = grid.points[0];
  s.M = o.y_samples > 0 ? o.y_samples : s.n;
  if (s.M % 2 || s.M > s.n || s.M < 4) throw InvalidArgument("y_samples must be even and at most the grid size");
  s.stride = std::max(1, o.x_stride);
  s.dx = grid.spacing(0);
  s.h = h;
  s.dv = std::numbers::pi * h / (s.M * s.dx);
  s.scale = s.dx / (std::numbers::pi * h);
  // Columns outside the hull of the data cannot be midpoints of two points of it.
  const double peak = *std::max_element(density.begin(), density.end());
  const double floor = 1e-24 * peak;
  for (int j = 0; j < s.n; ++j)
    if (density[j] > floor) {
      if (s.hull_hi < 0) s.hull_lo = j;
      s.hull_hi = j;
    }
  return s;
}

// c_m for m in [-M/2, M/2) stored at index m mod M; the unpaired m = -M/2
// term is replaced by the real part so the transform is exactly real.
struct Correlator {
  const Setup& s;
  const std::vector<const std::vector<Complex>*>& states;
  const std::vector<double>& weights;

  // Returns false for an identically zero column.
  bool fill(int j, Complex* c) const {
    std::fill(c, c + s.M, Complex(0.0));
    if (j < s.hull_lo || j > s.hull_hi) return false;
    const int reach = std::min({j - s.hull_lo, s.hull_hi - j, s.M / 2});
    for (size_t q = 0; q < states.size(); ++q) {
      const Complex* p = states[q]->data();
      const double w = weights[q];
      for (int m = -std::min(reach, s.M / 2 - 1); m <= std::min(reach, s.M / 2 - 1); ++m) {
        const int ip = ((j + m) % s.n + s.n) % s.n, im = ((j - m) % s.n + s.n) % s.n;
        c[(m + s.M) % s.M] += w * p[ip] * std::conj(p[im]);
      }
      if (reach >= s.M / 2) {
        const int m = s.M / 2;
        const int ip = ((j + m) % s.n + s.n) % s.n, im = ((j - m) % s.n + s.n) % s.n;
        c[s.M / 2] += w * (p[ip] * std::conj(p[im])).real();
      }
    }
    return true;
  }
};

double signed_v(int k, int M) { return (k < M / 2 ? k : k - M); }

WignerGrid transform(const SpatialGrid& grid, double h, const std::vector<const std::vector<Complex>*>& states,
                     const std::vector<double>& weights, const std::vector<double>& density, const WignerOptions& o) {
  const Setup s = make_setup(grid, h, density, o);
  const Correlator corr{s, states, weights};
  WignerGrid g;
  g.h = h;
  g.dx = s.dx * s.stride;
  g.dv = s.dv;
  // Stored velocities in increasing order.
  std::vector<int> keep;
  for (int k = -s.M / 2; k < s.M / 2; ++k)
    if (o.v_limit <= 0.0 || std::abs(k * s.dv) <= o.v_limit) keep.push_back((k + s.M) % s.M);
  for (int kk : keep) g.v.push_back(signed_v(kk, s.M) * s.dv);
  for (int j = 0; j < s.n; j += s.stride) g.x.push_back(grid.coordinate(0, j));
  const size_t nx = g.x.size(), nv = keep.size();
  g.values.assign(nx * nv, 0.0);
  g.x_marginal.assign(nx, 0.0);
  std::vector<double> edge(nx, 0.0), max_re(nx, 0.0), max_im(nx, 0.0);
  const int edge_bins[4] = {s.M / 2, s.M / 2 + 1, s.M / 2 - 2, s.M / 2 - 1};

  const int workers = o.pool ? o.pool->size() : 1;
  std::vector<std::unique_ptr<ComplexFft>> ffts(workers);
  parallel_for(o.pool, nx, [&](size_t b, size_t e, int w) {
    if (!ffts[w]) ffts[w] = std::make_unique<ComplexFft>(s.M);
    ComplexFft& fft = *ffts[w];
    for (size_t ix = b; ix < e; ++ix) {
      Complex* c = fft.buffer();
      if (!corr.fill(static_cast<int>(ix) * s.stride, c)) continue;
      fft.forward_in_place();
      double marg = 0.0, re = 0.0, im = 0.0;
      for (int k = 0; k < s.M; ++k) {
        marg += c[k].real();
        re = std::max(re, std::abs(c[k].real()));
        im = std::max(im, std::abs(c[k].imag()));
      }
      g.x_marginal[ix] = marg * s.scale * s.dv;
      max_re[ix] = re;
      max_im[ix] = im;
      for (int kk : edge_bins) edge[ix] += c[kk].real() * s.scale;
      for (size_t iv = 0; iv < nv; ++iv) g.values[ix * nv + iv] = c[keep[iv]].real() * s.scale;
    }
  });
  double re = 0.0, im = 0.0, em = 0.0;
  for (size_t ix = 0; ix < nx; ++ix) {
    re = std::max(re, max_re[ix]);
    im = std::max(im, max_im[ix]);
    em += edge[ix];
  }
  g.imaginary_residue = re > 0.0 ? im / re : 0.0;
  g.edge_mass = std::abs(em) * g.dx * g.dv;
  g.v_marginal.assign(nv, 0.0);
  for (size_t ix = 0; ix < nx; ++ix)
    for (size_t iv = 0; iv < nv; ++iv) g.v_marginal[iv] += g.values[ix * nv + iv] * g.dx;
  if (o.check_aliasing && g.edge_mass > o.alias_tolerance)
    throw AliasingError("Wigner velocity grid too narrow: edge mass " + std::to_string(g.edge_mass), g.edge_mass);
  return g;
}

WignerPairings pairings(const SpatialGrid& grid, double h, const std::vector<const std::vector<Complex>*>& states,
                        const std::vector<double>& weights, const std::vector<double>& density,
                        const TestFunctionPanel& panel, const WignerOptions& o,
                        const std::function<WignerGrid()>& full_grid) {
  const Setup s = make_setup(grid, h, density, o);
  const Correlator corr{s, states, weights};

  // One transformed velocity factor per separable term, plus the constant
  // (normalization) and the aliasing indicator.
  struct Term {
    int function;
    std::function<double(double)> x_factor;
    std::vector<Complex> v_hat;
  };
  std::vector<Term> terms;
  ComplexFft fft(s.M);
  auto transform_v = [&](const std::function<double(double)>& V) {
    Complex* b = fft.buffer();
    for (int k = 0; k < s.M; ++k) b[k] = V(signed_v(k, s.M) * s.dv);
    fft.forward_in_place();
    return std::vector<Complex>(b, b + s.M);
  };
  const int norm_id = -1, edge_id = -2;
  terms.push_back({norm_id, [](double) { return 1.0; }, transform_v([](double) { return 1.0; })});
  {
    const double lo = -s.M / 2 * s.dv, hi = (s.M / 2 - 1) * s.dv, dv = s.dv;
    terms.push_back({edge_id, [](double) { return 1.0; },
                     transform_v([=](double v) { return (v < lo + 1.5 * dv || v > hi - 1.5 * dv) ? 1.0 : 0.0; })});
  }
  std::vector<int> fallback;
  for (size_t f = 0; f < panel.size(); ++f) {
    if (panel[f].separable.empty()) {
      fallback.push_back(static_cast<int>(f));
      continue;
    }
    for (const auto& t : panel[f].separable) terms.push_back({static_cast<int>(f), t.x_factor, transform_v(t.v_factor)});
  }

  const int workers = o.pool ? o.pool->size() : 1;
  std::vector<std::vector<double>> acc(workers, std::vector<double>(terms.size(), 0.0));
  const size_t nx = (s.n + s.stride - 1) / s.stride;
  parallel_for(o.pool, nx, [&](size_t b, size_t e, int w) {
    std::vector<Complex> c(s.M);
    for (size_t ix = b; ix < e; ++ix) {
      const int j = static_cast<int>(ix) * s.stride;
      if (!corr.fill(j, c.data())) continue;
      const double x = grid.coordinate(0, j);
      for (size_t t = 0; t < terms.size(); ++t) {
        const Complex* vh = terms[t].v_hat.data();
        double sum = 0.0;
        for (int m = 0; m < s.M; ++m) sum += (c[m] * vh[m]).real();
        acc[w][t] += terms[t].x_factor(x) * sum;
      }
    }
  });
  std::vector<double> total(terms.size(), 0.0);
  for (int w = 0; w < workers; ++w)
    for (size_t t = 0; t < terms.size(); ++t) total[t] += acc[w][t];
  const double cell = s.scale * s.dv * s.dx * s.stride;

  WignerPairings out;
  out.values.assign(panel.size(), 0.0);
  for (size_t t = 0; t < terms.size(); ++t) {
    const double v = total[t] * cell;
    if (terms[t].function == norm_id) out.normalization = v;
    else if (terms[t].function == edge_id) out.edge_mass = std::abs(v);
    else out.values[terms[t].function] += v;
  }
  if (o.check_aliasing && out.edge_mass > o.alias_tolerance)
    throw AliasingError("Wigner velocity grid too narrow: edge mass " + std::to_string(out.edge_mass), out.edge_mass);
  if (!fallback.empty()) {
    const WignerGrid g = full_grid();
    for (int f : fallback) out.values[f] = weak_pair_wigner(g, panel[f]);
  }
  return out;
}

std::vector<double> mixture_density(const StateMixture& mix) {
  std::vector<double> d(mix.grid.points[0], 0.0);
  for (size_t q = 0; q < mix.states.size(); ++q)
    for (size_t j = 0; j < d.size(); ++j) d[j] += mix.weights[q] * std::norm(mix.states[q][j]);
  return d;
}

std::vector<const std::vector<Complex>*> state_ptrs(const StateMixture& mix) {
  if (mix.states.empty() || mix.states.size() != mix.weights.size())
    throw InvalidArgument("state mixture needs matching states and weights");
  std::vector<const std::vector<Complex>*> p;
  for (const auto& st : mix.states) {
    if ((int)st.size() != mix.grid.points[0]) throw InvalidArgument("mixture state does not match its grid");
    p.push_back(&st);
  }
  return p;
}

}  // namespace

double WignerGrid::total() const {
  double s = 0.0;
  for (double f : values) s += f;
  return s * dx * dv;
}

WignerGrid wigner_transform(const WaveField& psi, const WignerOptions& o) {
  const std::vector<const std::vector<Complex>*> st{&psi.values};
  const std::vector<double> w{1.0};
  return transform(psi.grid, psi.h, st, w, psi.density(), o);
}

WignerGrid wigner_transform(const StateMixture& mix, const WignerOptions& o) {
  return transform(mix.grid, mix.h, state_ptrs(mix), mix.weights, mixture_density(mix), o);
}

double weak_pair_wigner(const WignerGrid& f, const TestFunction& F) {
  double acc = 0.0;
  for (size_t ix = 0; ix < f.x.size(); ++ix) {
    const double x = f.x[ix];
    double col = 0.0;
    for (size_t iv = 0; iv < f.v.size(); ++iv) col += f.at(ix, iv) * F(x, f.v[iv]);
    acc += col;
  }
  return acc * f.dx * f.dv;
}

WignerPairings wigner_pairings(const WaveField& psi, const TestFunctionPanel& panel, const WignerOptions& o) {
  const std::vector<const std::vector<Complex>*> st{&psi.values};
  const std::vector<double> w{1.0};
  return pairings(psi.grid, psi.h, st, w, psi.density(), panel, o, [&] {
    WignerOptions full = o;
    full.v_limit = 0.0;
    return wigner_transform(psi, full);
  });
}

WignerPairings wigner_pairings(const StateMixture& mix, const TestFunctionPanel& panel, const WignerOptions& o) {
  return pairings(mix.grid, mix.h, state_ptrs(mix), mix.weights, mixture_density(mix), panel, o, [&] {
    WignerOptions full = o;
    full.v_limit = 0.0;
    return wigner_transform(mix, full);
  });
}

std::vector<double> momentum_density(const WaveField& psi) {
  const int n = psi.size();
  ComplexFft fft(2 * n);
  Complex* b = fft.buffer();
  std::fill(b, b + 2 * n, Complex(0.0));
  std::copy(psi.values.begin(), psi.values.end(), b);
  fft.forward_in_place();
  const double dx = psi.dx();
  std::vector<double> P(n);
  for (int k = -n / 2; k < n / 2; ++k) {
    const Complex z = b[(k + 2 * n) % (2 * n)] * dx;
    P[k + n / 2] = std::norm(z) / (2.0 * std::numbers::pi * psi.h);
  }
  return P;
}

}  // namespace mfl::quantum
