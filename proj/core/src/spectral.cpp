#include "viscokit/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace viscokit {

namespace {

// divided differences switch to their limit expressions when two nodes
// coalesce, either by the spectral multiplicity pattern or by value
constexpr double kDDRel = 1e-10;

struct Nodes {
  const Spectral3& s;
  const std::array<double, 3>& x;
  const SpectralFn& fn;
  double scale;

  bool same(int a, int b) const {
    return s.same(a, b) || std::abs(x[static_cast<std::size_t>(a)] - x[static_cast<std::size_t>(b)]) <= kDDRel * scale;
  }
  double f(int a) const { return fn.f[static_cast<std::size_t>(a)]; }
  double df(int a) const { return fn.df[static_cast<std::size_t>(a)]; }
  double ddf(int a) const { return fn.ddf[static_cast<std::size_t>(a)]; }
  double node(int a) const { return x[static_cast<std::size_t>(a)]; }

  // f[x_a, x_b]
  double dd1(int a, int b) const {
    if (same(a, b)) return 0.5 * (df(a) + df(b));
    return (f(a) - f(b)) / (node(a) - node(b));
  }
  // f[x_a, x_a, x_b]
  double dd2_rep(int a, int b) const {
    if (same(a, b)) return 0.5 * ddf(a);
    return (df(a) - dd1(a, b)) / (node(a) - node(b));
  }
  // f[x_0, x_1, x_2]
  double dd2_all() const {
    const bool s01 = same(0, 1), s12 = same(1, 2), s02 = same(0, 2);
    if (s01 && s12) return 0.5 * ddf(1);
    if (s01) return dd2_rep(0, 2);  // nodes {x0, x0, x2}
    if (s12) return dd2_rep(1, 0);  // nodes {x1, x1, x0}
    if (s02) return dd2_rep(0, 1);
    return (dd1(0, 1) - dd1(1, 2)) / (node(0) - node(2));
  }
};

}  // namespace

SymTensor2 spectral_apply(const Spectral3& s, const std::array<double, 3>& f) {
  SymTensor2 r;
  for (int a = 0; a < 3; ++a) r += f[static_cast<std::size_t>(a)] * s.projector(a);
  return r;
}

Tensor4 spectral_first_derivative(const Spectral3& s, const std::array<double, 3>& x,
                                  const SpectralFn& fn) {
  double scale = 0.0;
  for (const double v : x) scale = std::max(scale, std::abs(v));
  const Nodes nd{s, x, fn, std::max(scale, 1e-300)};

  std::array<SymTensor2, 3> m;
  for (int a = 0; a < 3; ++a) m[static_cast<std::size_t>(a)] = s.projector(a);

  Tensor4 t;
  for (int a = 0; a < 3; ++a)
    t += fn.df[static_cast<std::size_t>(a)] * otimes(m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(a)]);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      t += 2.0 * nd.dd1(a, b) * odot(m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(b)]);
  return t;
}

Tensor6 spectral_second_derivative(const Spectral3& s, const std::array<double, 3>& x,
                                   const SpectralFn& fn) {
  double scale = 0.0;
  for (const double v : x) scale = std::max(scale, std::abs(v));
  const Nodes nd{s, x, fn, std::max(scale, 1e-300)};

  const auto& n = s.directions;
  std::array<SymTensor2, 3> m;
  for (int a = 0; a < 3; ++a)
    m[static_cast<std::size_t>(a)] = sym_dyad(n[static_cast<std::size_t>(a)], n[static_cast<std::size_t>(a)]);
  // symmetrized cross dyads s_ab = (N_a x N_b + N_b x N_a)/2
  const auto sd = [&](int a, int b) {
    return sym_dyad(n[static_cast<std::size_t>(a)], n[static_cast<std::size_t>(b)]);
  };
  // minor-symmetrized basis element with index pattern (ab | ca | bc)
  const auto hsum = [&](int a, int b, int c) { return 8.0 * outer6(sd(a, b), sd(c, a), sd(b, c)); };

  Tensor6 t;
  for (int a = 0; a < 3; ++a)
    t += fn.ddf[static_cast<std::size_t>(a)] *
         outer6(m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(a)]);

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      // coefficient of the {a,a,b} patterns: f[x_a, x_a, x_b] / 4
      const double z = 0.25 * nd.dd2_rep(a, b);
      if (z != 0.0) t += z * (hsum(a, b, a) + hsum(a, a, b) + hsum(b, a, a));
    }

  const double rho = 0.25 * nd.dd2_all();
  if (rho != 0.0) {
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) t += rho * hsum(p[0], p[1], p[2]);
  }
  return t;
}

}  // namespace viscokit
