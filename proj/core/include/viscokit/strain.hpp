// Generalized strain families and the tensors derived from them: the
// strain E(C), the rank-four map Q = 2 dE/dC, the rank-six map
// L = 4 d2E/dC dC, and the coercive-strain inverse machinery that
// reconstructs an elastic deformation tensor Ce from a strain Ee.

#pragma once

#include <array>

#include "viscokit/spectral.hpp"
#include "viscokit/tensor.hpp"

namespace viscokit {

enum class StrainFamily {
  SethHill,             // (lambda^m - 1)/m, m != 0, non-coercive
  Hencky,               // ln(lambda)
  CurnierRakotomanana,  // (lambda^m - lambda^-n)/(m+n), m n > 0
  CurnierZysset,        // ((2+m) lambda^2 - (2-m) lambda^-2 - 2m)/8, -2 <= m <= 2
  DarijaniNaghdabadi,   // (exp(m(lambda-1)) - exp(n(1/lambda-1)))/(m+n), m, n > 0
};

class ScaleFunction {
 public:
  static ScaleFunction seth_hill(double m);
  static ScaleFunction hencky();
  static ScaleFunction curnier_rakotomanana(double m, double n);
  static ScaleFunction curnier_zysset(double m);
  static ScaleFunction darijani_naghdabadi(double m, double n);

  StrainFamily family() const { return family_; }
  double m() const { return m_; }
  double n() const { return n_; }
  bool coercive() const;

  struct Eval {
    double E, dE, ddE;
  };
  // value and first two derivatives at a stretch; DomainError for lambda <= 0
  Eval eval(double lambda) const;
  double value(double lambda) const { return eval(lambda).E; }

  // E^-1(w) by bracketing plus safeguarded Newton on log(lambda).
  // RangeError when w lies outside the range of E (non-coercive families).
  double inverse(double w) const;

 private:
  ScaleFunction(StrainFamily f, double m, double n) : family_(f), m_(m), n_(n) {}
  StrainFamily family_;
  double m_, n_;
};

// Strain and its first two C-derivatives built from one shared spectral
// decomposition of C.
struct StrainKit {
  Spectral3 spec;  // of C
  std::array<double, 3> lambda{};
  SymTensor2 E;
  Tensor4 Q;  // 2 dE/dC
  Tensor6 L;  // 4 d2E/dC dC
};

// strain tensor only (no derivative tensors); NotSPD for non-SPD C
SymTensor2 generalized_strain(const SymTensor2& C, const ScaleFunction& sf);
StrainKit build_strain_kit(const SymTensor2& C, const ScaleFunction& sf);

// Elastic-side kit: inverts the scale function on the eigenvalues of a
// symmetric strain Ee to recover stretches and the elastic deformation
// tensor Ce, together with the derivative maps needed by the nonlinear
// evolution integrator.  With a non-coercive scale function this may throw
// RangeError if an eigenvalue of Ee leaves the range of E.
struct ElasticKit {
  Spectral3 spec;  // eigenstructure of Ee (frame shared by Ce)
  std::array<double, 3> lambda{};
  SymTensor2 Ee;
  SymTensor2 Ce;
  SymTensor2 Ce_inv;
  double Je = 1.0;
  Tensor4 Qe;      // 2 dEe/dCe
  Tensor4 Qe_inv;  // (1/2) dCe/dEe
  Tensor6 Ke;      // (1/4) d2Ce/dEe dEe
};

ElasticKit build_elastic_kit(const SymTensor2& Ee, const ScaleFunction& sf);

// J and the unimodular part of C
struct IsochoricSplit {
  double J;
  SymTensor2 Ctil;
};
IsochoricSplit isochoric_split(const SymTensor2& C);

}  // namespace viscokit
