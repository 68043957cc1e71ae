#include "viscokit/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace viscokit {

namespace {

constexpr double kGapRel = 1e-8;  // multiplicity classification threshold

// full 3x3 from the 6 stored components
void unpack(const SymTensor2& a, double m[3][3]) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a(i, j);
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  Vec3 r;
  r[0] = a[1] * b[2] - a[2] * b[1];
  r[1] = a[2] * b[0] - a[0] * b[2];
  r[2] = a[0] * b[1] - a[1] * b[0];
  return r;
}

Vec3 normalized(const Vec3& a) {
  const double n = std::sqrt(dot(a, a));
  if (n == 0.0) throw Error("normalized: zero vector");
  Vec3 r = a;
  r[0] /= n;
  r[1] /= n;
  r[2] /= n;
  return r;
}

int pair_index(int i, int j) {
  static constexpr int map[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
  return map[i][j];
}

SymTensor2& SymTensor2::operator+=(const SymTensor2& o) {
  for (int k = 0; k < 6; ++k) c_[static_cast<std::size_t>(k)] += o[k];
  return *this;
}

SymTensor2& SymTensor2::operator-=(const SymTensor2& o) {
  for (int k = 0; k < 6; ++k) c_[static_cast<std::size_t>(k)] -= o[k];
  return *this;
}

SymTensor2& SymTensor2::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

double SymTensor2::det() const {
  const double a = c_[0], b = c_[1], c = c_[2], d = c_[3], e = c_[4], f = c_[5];
  return a * (b * c - e * e) - d * (d * c - e * f) + f * (d * e - b * f);
}

double SymTensor2::norm() const { return std::sqrt(ddot(*this, *this)); }

double SymTensor2::max_abs() const {
  double m = 0.0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

SymTensor2 SymTensor2::inverse() const {
  const double a = c_[0], b = c_[1], c = c_[2], d = c_[3], e = c_[4], f = c_[5];
  const double de = det();
  const double scale = max_abs();
  if (std::abs(de) <= 1e-30 * scale * scale * scale || de == 0.0)
    throw Error("SymTensor2::inverse: singular tensor");
  SymTensor2 r;
  r[0] = (b * c - e * e) / de;
  r[1] = (a * c - f * f) / de;
  r[2] = (a * b - d * d) / de;
  r[3] = (e * f - d * c) / de;
  r[4] = (d * f - a * e) / de;
  r[5] = (d * e - b * f) / de;
  return r;
}

SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }
SymTensor2 operator*(SymTensor2 a, double s) { return a *= s; }

SymTensor2 sym_dyad(const Vec3& u, const Vec3& v) {
  SymTensor2 r;
  for (int k = 0; k < 6; ++k) {
    const int i = kRow[static_cast<std::size_t>(k)], j = kCol[static_cast<std::size_t>(k)];
    r[k] = 0.5 * (u[i] * v[j] + u[j] * v[i]);
  }
  return r;
}

SymTensor2 sym_product(const SymTensor2& a, const SymTensor2& b) {
  double ma[3][3], mb[3][3];
  unpack(a, ma);
  unpack(b, mb);
  SymTensor2 r;
  for (int k = 0; k < 6; ++k) {
    const int i = kRow[static_cast<std::size_t>(k)], j = kCol[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (int p = 0; p < 3; ++p) s += ma[i][p] * mb[p][j] + mb[i][p] * ma[p][j];
    r[k] = 0.5 * s;
  }
  return r;
}

Tensor4 Tensor4::identity() {
  Tensor4 t;
  for (int k = 0; k < 6; ++k) t(k, k) = (k < 3) ? 1.0 : 0.5;
  return t;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) (*this)(i, j) += o(i, j);
  return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& o) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) (*this)(i, j) -= o(i, j);
  return *this;
}

Tensor4& Tensor4::operator*=(double s) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) (*this)(i, j) *= s;
  return *this;
}

Tensor4 Tensor4::transpose() const {
  Tensor4 t;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) t(i, j) = (*this)(j, i);
  return t;
}

bool Tensor4::major_symmetric(double tol) const {
  double d = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) d = std::max(d, std::abs((*this)(i, j) - (*this)(j, i)));
  return d <= tol * std::max(1.0, max_abs());
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
Tensor4 operator*(double s, Tensor4 a) { return a *= s; }
Tensor4 operator*(Tensor4 a, double s) { return a *= s; }

Tensor6& Tensor6::operator+=(const Tensor6& o) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) (*this)(i, j, k) += o(i, j, k);
  return *this;
}

Tensor6& Tensor6::operator*=(double s) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) (*this)(i, j, k) *= s;
  return *this;
}

double Tensor6::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) m = std::max(m, std::abs((*this)(i, j, k)));
  return m;
}

Tensor6 operator+(Tensor6 a, const Tensor6& b) { return a += b; }
Tensor6 operator*(double s, Tensor6 a) { return a *= s; }

double ddot(const SymTensor2& a, const SymTensor2& b) {
  double s = 0.0;
  for (int k = 0; k < 6; ++k) s += kWeight[static_cast<std::size_t>(k)] * a[k] * b[k];
  return s;
}

SymTensor2 ddot(const Tensor4& q, const SymTensor2& a) {
  SymTensor2 r;
  for (int i = 0; i < 6; ++i) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j) s += q(i, j) * kWeight[static_cast<std::size_t>(j)] * a[j];
    r[i] = s;
  }
  return r;
}

SymTensor2 ddot(const SymTensor2& a, const Tensor4& q) {
  SymTensor2 r;
  for (int j = 0; j < 6; ++j) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += kWeight[static_cast<std::size_t>(i)] * a[i] * q(i, j);
    r[j] = s;
  }
  return r;
}

Tensor4 ddot(const Tensor4& q, const Tensor4& r) {
  Tensor4 t;
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k) {
      double s = 0.0;
      for (int j = 0; j < 6; ++j) s += q(i, j) * kWeight[static_cast<std::size_t>(j)] * r(j, k);
      t(i, k) = s;
    }
  return t;
}

Tensor4 ddot(const SymTensor2& a, const Tensor6& l) {
  Tensor4 t;
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      double s = 0.0;
      for (int i = 0; i < 6; ++i) s += kWeight[static_cast<std::size_t>(i)] * a[i] * l(i, j, k);
      t(j, k) = s;
    }
  return t;
}

Tensor4 ddot(const Tensor6& l, const SymTensor2& a) {
  Tensor4 t;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double s = 0.0;
      for (int k = 0; k < 6; ++k) s += l(i, j, k) * kWeight[static_cast<std::size_t>(k)] * a[k];
      t(i, j) = s;
    }
  return t;
}

Tensor4 otimes(const SymTensor2& a, const SymTensor2& b) {
  Tensor4 t;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) t(i, j) = a[i] * b[j];
  return t;
}

Tensor4 odot(const SymTensor2& a, const SymTensor2& b) {
  Tensor4 t;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const int i = kRow[static_cast<std::size_t>(p)], j = kCol[static_cast<std::size_t>(p)];
      const int k = kRow[static_cast<std::size_t>(q)], l = kCol[static_cast<std::size_t>(q)];
      t(p, q) = 0.25 * (a(i, k) * b(j, l) + a(i, l) * b(j, k) + b(i, k) * a(j, l) + b(i, l) * a(j, k));
    }
  return t;
}

Tensor6 outer6(const SymTensor2& a, const SymTensor2& b, const SymTensor2& c) {
  Tensor6 t;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) t(i, j, k) = a[i] * b[j] * c[k];
  return t;
}

// ---------------------------------------------------------------------------
// 6x6 solves in the Mandel basis

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Lu6 {
  double m[6][6];
  int piv[6];
};

Lu6 factorize(const Tensor4& k) {
  Lu6 lu{};
  const std::array<double, 6> s = {1.0, 1.0, 1.0, kSqrt2, kSqrt2, kSqrt2};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      lu.m[i][j] = k(i, j) * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];

  double scale = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) scale = std::max(scale, std::abs(lu.m[i][j]));
  if (scale == 0.0) throw SingularK("solve: zero operator");

  for (int c = 0; c < 6; ++c) {
    int p = c;
    for (int r = c + 1; r < 6; ++r)
      if (std::abs(lu.m[r][c]) > std::abs(lu.m[p][c])) p = r;
    if (std::abs(lu.m[p][c]) <= 1e-14 * scale)
      throw SingularK("solve: singular operator (pivot breakdown)");
    lu.piv[c] = p;
    if (p != c)
      for (int j = 0; j < 6; ++j) std::swap(lu.m[c][j], lu.m[p][j]);
    for (int r = c + 1; r < 6; ++r) {
      lu.m[r][c] /= lu.m[c][c];
      for (int j = c + 1; j < 6; ++j) lu.m[r][j] -= lu.m[r][c] * lu.m[c][j];
    }
  }
  return lu;
}

void lu_solve(const Lu6& lu, double x[6]) {
  for (int c = 0; c < 6; ++c)
    if (lu.piv[c] != c) std::swap(x[c], x[lu.piv[c]]);
  for (int r = 1; r < 6; ++r)
    for (int c = 0; c < r; ++c) x[r] -= lu.m[r][c] * x[c];
  for (int r = 5; r >= 0; --r) {
    for (int c = r + 1; c < 6; ++c) x[r] -= lu.m[r][c] * x[c];
    x[r] /= lu.m[r][r];
  }
}

}  // namespace

SymTensor2 solve(const Tensor4& k, const SymTensor2& b) {
  const Lu6 lu = factorize(k);
  const std::array<double, 6> s = {1.0, 1.0, 1.0, kSqrt2, kSqrt2, kSqrt2};
  double x[6];
  for (int i = 0; i < 6; ++i) x[i] = b[i] * s[static_cast<std::size_t>(i)];
  lu_solve(lu, x);
  SymTensor2 r;
  for (int i = 0; i < 6; ++i) r[i] = x[i] / s[static_cast<std::size_t>(i)];
  return r;
}

Tensor4 solve(const Tensor4& k, const Tensor4& b) {
  const Lu6 lu = factorize(k);
  const std::array<double, 6> s = {1.0, 1.0, 1.0, kSqrt2, kSqrt2, kSqrt2};
  Tensor4 r;
  for (int j = 0; j < 6; ++j) {
    double x[6];
    for (int i = 0; i < 6; ++i)
      x[i] = b(i, j) * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
    lu_solve(lu, x);
    for (int i = 0; i < 6; ++i)
      r(i, j) = x[i] / (s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// spectral decomposition

SymTensor2 Spectral3::projector(int a) const {
  return sym_dyad(directions[static_cast<std::size_t>(a)], directions[static_cast<std::size_t>(a)]);
}

SymTensor2 Spectral3::reconstruct() const {
  SymTensor2 r;
  for (int a = 0; a < 3; ++a) r += eigenvalues[static_cast<std::size_t>(a)] * projector(a);
  return r;
}

namespace {

// characteristic cubic p(x) = -x^3 + c2 x^2 - c1 x + c0 of a 3x3 symmetric matrix
struct CharPoly {
  double c2, c1, c0;
  double operator()(double x) const { return ((-x + c2) * x - c1) * x + c0; }
  double d(double x) const { return (-3.0 * x + 2.0 * c2) * x - c1; }
};

CharPoly char_poly(const SymTensor2& a) {
  CharPoly p{};
  p.c2 = a.trace();
  p.c1 = a[0] * a[1] - a[3] * a[3] + a[1] * a[2] - a[4] * a[4] + a[0] * a[2] - a[5] * a[5];
  p.c0 = a.det();
  return p;
}

std::array<double, 3> cardano_eigenvalues(const SymTensor2& a) {
  const double q = a.trace() / 3.0;
  SymTensor2 b = a;
  b[0] -= q;
  b[1] -= q;
  b[2] -= q;
  const double p2 = ddot(b, b) / 6.0;
  const double p = std::sqrt(std::max(p2, 0.0));
  std::array<double, 3> ev{q, q, q};
  if (p > 0.0) {
    double r = b.det() / (2.0 * p * p * p);
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    ev[0] = q + 2.0 * p * std::cos(phi);
    ev[2] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    ev[1] = 3.0 * q - ev[0] - ev[2];
  }
  // one Newton polish per root
  const CharPoly cp = char_poly(a);
  for (auto& x : ev) {
    const double dp = cp.d(x);
    if (std::abs(dp) > 1e-30) x -= cp(x) / dp;
  }
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

Vec3 dominant_column(const SymTensor2& m) {
  int best = 0;
  double bd = -1.0;
  for (int j = 0; j < 3; ++j) {
    const double d = m(j, j);
    if (d > bd) {
      bd = d;
      best = j;
    }
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = m(i, best);
  return normalized(v);
}

// Frobenius covariant of an isolated eigenvalue
SymTensor2 isolated_projector(const SymTensor2& a, double lam, double lb, double lc) {
  double ma[3][3];
  unpack(a, ma);
  double p1[3][3], p2[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      p1[i][j] = ma[i][j] - (i == j ? lb : 0.0);
      p2[i][j] = ma[i][j] - (i == j ? lc : 0.0);
    }
  SymTensor2 r;
  const double den = (lam - lb) * (lam - lc);
  for (int k = 0; k < 6; ++k) {
    const int i = kRow[static_cast<std::size_t>(k)], j = kCol[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (int p = 0; p < 3; ++p) s += p1[i][p] * p2[p][j];
    r[k] = s / den;
  }
  return r;
}

Vec3 any_orthogonal(const Vec3& n) {
  int k = 0;
  double best = std::abs(n[0]);
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < best) {
      best = std::abs(n[i]);
      k = i;
    }
  Vec3 e;
  e[k] = 1.0;
  Vec3 u;
  for (int i = 0; i < 3; ++i) u[i] = e[i] - n[k] * n[i];
  return normalized(u);
}

double quad_form(const SymTensor2& a, const Vec3& u, const Vec3& v) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += u[i] * a(i, j) * v[j];
  return s;
}

}  // namespace

Spectral3 spectral_decompose(const SymTensor2& a, bool spd_required) {
  Spectral3 out;
  const double scale = a.max_abs();

  if (scale == 0.0) {
    if (spd_required) throw NotSPD("spectral_decompose: zero tensor is not SPD");
    out.eigenvalues = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) out.directions[static_cast<std::size_t>(i)][i] = 1.0;
    out.cluster = {0, 0, 0};
    out.pattern = Multiplicity::Triple;
    return out;
  }

  SymTensor2 as = a;
  as *= 1.0 / scale;
  std::array<double, 3> ev = cardano_eigenvalues(as);

  const double emax = std::max({std::abs(ev[0]), std::abs(ev[1]), std::abs(ev[2])});
  const double gap = kGapRel * emax;
  std::array<int, 3> cl{0, 0, 0};
  cl[1] = (ev[0] - ev[1] <= gap) ? cl[0] : cl[0] + 1;
  cl[2] = (ev[1] - ev[2] <= gap) ? cl[1] : cl[1] + 1;
  const int nclusters = cl[2] + 1;

  std::array<Vec3, 3> n;
  if (nclusters == 1) {
    for (int i = 0; i < 3; ++i) n[static_cast<std::size_t>(i)][i] = 1.0;
    out.pattern = Multiplicity::Triple;
  } else if (nclusters == 2) {
    // isolated eigenvalue is whichever end of the sorted triple stands alone
    const int iso = (cl[0] != cl[1]) ? 0 : 2;
    const int p = (iso == 0) ? 1 : 0, q = (iso == 0) ? 2 : 1;
    const SymTensor2 miso = isolated_projector(as, ev[static_cast<std::size_t>(iso)],
                                               ev[static_cast<std::size_t>(p)],
                                               ev[static_cast<std::size_t>(q)]);
    const Vec3 niso = dominant_column(miso);
    // split the two-dimensional eigenspace by diagonalizing the restriction
    Vec3 u = any_orthogonal(niso);
    Vec3 v = cross(niso, u);
    const double r00 = quad_form(as, u, u);
    const double r01 = quad_form(as, u, v);
    const double r11 = quad_form(as, v, v);
    double c = 1.0, s = 0.0;
    if (std::abs(r01) > 1e-300) {
      const double theta = 0.5 * std::atan2(2.0 * r01, r00 - r11);
      c = std::cos(theta);
      s = std::sin(theta);
    }
    Vec3 w1, w2;
    for (int i = 0; i < 3; ++i) {
      w1[i] = c * u[i] + s * v[i];
      w2[i] = -s * u[i] + c * v[i];
    }
    double l1 = quad_form(as, w1, w1);
    double l2 = quad_form(as, w2, w2);
    if (l1 < l2) {
      std::swap(w1, w2);
      std::swap(l1, l2);
    }
    n[static_cast<std::size_t>(iso)] = normalized(niso);
    n[static_cast<std::size_t>(p)] = w1;
    n[static_cast<std::size_t>(q)] = w2;
    ev[static_cast<std::size_t>(p)] = l1;
    ev[static_cast<std::size_t>(q)] = l2;
    out.pattern = Multiplicity::Double;
  } else {
    for (int i = 0; i < 3; ++i) {
      const int b = (i + 1) % 3, c = (i + 2) % 3;
      const SymTensor2 m = isolated_projector(as, ev[static_cast<std::size_t>(i)],
                                              ev[static_cast<std::size_t>(b)],
                                              ev[static_cast<std::size_t>(c)]);
      n[static_cast<std::size_t>(i)] = dominant_column(m);
    }
    out.pattern = Multiplicity::Distinct;
  }

  // enforce exact orthonormality (modified Gram-Schmidt + cross product)
  n[0] = normalized(n[0]);
  {
    const double d = dot(n[1], n[0]);
    for (int i = 0; i < 3; ++i) n[1][i] -= d * n[0][i];
    n[1] = normalized(n[1]);
    n[2] = cross(n[0], n[1]);
  }

  out.directions = n;
  for (int i = 0; i < 3; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = ev[static_cast<std::size_t>(i)] * scale;
  out.cluster = cl;

  if (spd_required && out.eigenvalues[2] <= 0.0)
    throw NotSPD("spectral_decompose: non-positive eigenvalue in SPD-required input");
  return out;
}

}  // namespace viscokit
