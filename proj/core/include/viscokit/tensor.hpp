// Value-semantic symmetric tensor algebra on R^3.
//
// Storage conventions
//   SymTensor2 : 6 components in the order (11, 22, 33, 12, 23, 13),
//                off-diagonals stored once with no weighting.
//   Tensor4    : minor-symmetric rank-4 tensors as 6x6 arrays of pair
//                representatives T[(ij)][(kl)].
//   Tensor6    : rank-6 tensors with minor symmetry in each pair, 6x6x6.
//
// Double contractions carry the weight of the off-diagonal pairs
// internally, so  ddot(A, B) = sum_ij A_ij B_ij  exactly as in continuum
// mechanics texts.  Index conventions:
//   ddot(A, B)      -> sum_ij A_ij B_ij
//   ddot(Q, A)_ij   -> sum_kl Q_ijkl A_kl
//   ddot(A, Q)_kl   -> sum_ij A_ij Q_ijkl
//   ddot(Q, R)_ijmn -> sum_kl Q_ijkl R_klmn
//   ddot(A, L)_klmn -> sum_ij A_ij L_ijklmn
//   ddot(L, A)_ijkl -> sum_mn L_ijklmn A_mn

#pragma once

#include <array>
#include <cstddef>

#include "viscokit/errors.hpp"

namespace viscokit {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
Vec3 normalized(const Vec3& a);

// component order (11, 22, 33, 12, 23, 13)
inline constexpr std::array<int, 6> kRow = {0, 1, 2, 0, 1, 0};
inline constexpr std::array<int, 6> kCol = {0, 1, 2, 1, 2, 2};
// contraction weight of each stored pair
inline constexpr std::array<double, 6> kWeight = {1.0, 1.0, 1.0, 2.0, 2.0, 2.0};

// voigt-style index of the (i,j) pair
int pair_index(int i, int j);

class SymTensor2 {
 public:
  SymTensor2() = default;
  SymTensor2(double a11, double a22, double a33, double a12, double a23, double a13)
      : c_{a11, a22, a33, a12, a23, a13} {}

  static SymTensor2 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static SymTensor2 diag(double a, double b, double c) { return {a, b, c, 0.0, 0.0, 0.0}; }

  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double operator()(int i, int j) const { return c_[static_cast<std::size_t>(pair_index(i, j))]; }

  SymTensor2& operator+=(const SymTensor2& o);
  SymTensor2& operator-=(const SymTensor2& o);
  SymTensor2& operator*=(double s);

  double trace() const { return c_[0] + c_[1] + c_[2]; }
  double det() const;
  double norm() const;  // |A| = sqrt(A : A)
  double max_abs() const;
  SymTensor2 inverse() const;  // throws Error on a singular input

 private:
  std::array<double, 6> c_{};
};

SymTensor2 operator+(SymTensor2 a, const SymTensor2& b);
SymTensor2 operator-(SymTensor2 a, const SymTensor2& b);
SymTensor2 operator*(double s, SymTensor2 a);
SymTensor2 operator*(SymTensor2 a, double s);

// 0.5 (u otimes v + v otimes u)
SymTensor2 sym_dyad(const Vec3& u, const Vec3& v);

// A B + B A is symmetric for symmetric A, B; returns 0.5 (A B + B A)
SymTensor2 sym_product(const SymTensor2& a, const SymTensor2& b);

class Tensor4 {
 public:
  Tensor4() = default;

  // rank-four identity on symmetric tensors, (I)_ijkl = (d_ik d_jl + d_il d_jk)/2
  static Tensor4 identity();

  double& operator()(int I, int J) { return m_[static_cast<std::size_t>(I)][static_cast<std::size_t>(J)]; }
  double operator()(int I, int J) const { return m_[static_cast<std::size_t>(I)][static_cast<std::size_t>(J)]; }

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator-=(const Tensor4& o);
  Tensor4& operator*=(double s);

  Tensor4 transpose() const;  // swaps the (ij) and (kl) pairs
  bool major_symmetric(double tol) const;
  double max_abs() const;

 private:
  std::array<std::array<double, 6>, 6> m_{};
};

Tensor4 operator+(Tensor4 a, const Tensor4& b);
Tensor4 operator-(Tensor4 a, const Tensor4& b);
Tensor4 operator*(double s, Tensor4 a);
Tensor4 operator*(Tensor4 a, double s);

class Tensor6 {
 public:
  Tensor6() = default;

  double& operator()(int I, int J, int K) {
    return m_[static_cast<std::size_t>(I)][static_cast<std::size_t>(J)][static_cast<std::size_t>(K)];
  }
  double operator()(int I, int J, int K) const {
    return m_[static_cast<std::size_t>(I)][static_cast<std::size_t>(J)][static_cast<std::size_t>(K)];
  }

  Tensor6& operator+=(const Tensor6& o);
  Tensor6& operator*=(double s);
  double max_abs() const;

 private:
  std::array<std::array<std::array<double, 6>, 6>, 6> m_{};
};

Tensor6 operator+(Tensor6 a, const Tensor6& b);
Tensor6 operator*(double s, Tensor6 a);

// contractions
double ddot(const SymTensor2& a, const SymTensor2& b);
SymTensor2 ddot(const Tensor4& q, const SymTensor2& a);
SymTensor2 ddot(const SymTensor2& a, const Tensor4& q);
Tensor4 ddot(const Tensor4& q, const Tensor4& r);
Tensor4 ddot(const SymTensor2& a, const Tensor6& l);
Tensor4 ddot(const Tensor6& l, const SymTensor2& a);

// (A otimes B)_ijkl = A_ij B_kl
Tensor4 otimes(const SymTensor2& a, const SymTensor2& b);
// minor-symmetrized dyadic, equals (A_ik B_jl + A_il B_jk)/2 whenever that
// expression is itself minor symmetric (in particular for B = A)
Tensor4 odot(const SymTensor2& a, const SymTensor2& b);
// (A otimes B otimes C) as a rank-6 pair-representative array
Tensor6 outer6(const SymTensor2& a, const SymTensor2& b, const SymTensor2& c);

// Solve K : X = B for X in the weighted (Mandel) component basis, where the
// contraction equals a 6x6 matrix-vector product.  Dense LU with partial
// pivoting; throws SingularK when the factorization breaks down.
SymTensor2 solve(const Tensor4& k, const SymTensor2& b);
Tensor4 solve(const Tensor4& k, const Tensor4& b);

// spectral decomposition ------------------------------------------------

enum class Multiplicity { Distinct, Double, Triple };

// Eigenstructure of a symmetric rank-2 tensor: eigenvalues in descending
// order, an orthonormal frame of eigenvectors, and the multiplicity pattern
// classified with the relative gap threshold 1e-8 * max |eigenvalue|.
struct Spectral3 {
  std::array<double, 3> eigenvalues{};
  std::array<Vec3, 3> directions{};
  std::array<int, 3> cluster{};  // eigenvalues a, b coalesce iff cluster[a] == cluster[b]
  Multiplicity pattern = Multiplicity::Distinct;

  SymTensor2 projector(int a) const;
  SymTensor2 reconstruct() const;
  bool same(int a, int b) const { return cluster[static_cast<std::size_t>(a)] == cluster[static_cast<std::size_t>(b)]; }
};

// Closed-form (Cardano) eigenvalues with one Newton polish per root plus a
// frame built from subspace projectors.  With spd_required the routine
// throws NotSPD when the smallest eigenvalue is non-positive.
Spectral3 spectral_decompose(const SymTensor2& a, bool spd_required);

}  // namespace viscokit
