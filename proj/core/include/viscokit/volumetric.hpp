// Volumetric energy catalog: Helmholtz densities Psi_vol(J), their
// Legendre-transformed Gibbs counterparts G_vol(P), and the density /
// compressibility relations.  The bulk response is purely elastic.

#pragma once

#include <span>

#include "viscokit/errors.hpp"

namespace viscokit {

enum class VolFamily { Incompressible, Quadratic, ST91, M94, L94 };

struct VolumetricModel {
  VolFamily family = VolFamily::Incompressible;
  double kappa = 0.0;  // bulk modulus, stress units; > 0 for compressible families
  double rho0 = 1000.0;

  static VolumetricModel incompressible(double rho0 = 1000.0);
  static VolumetricModel quadratic(double kappa, double rho0 = 1000.0);
  static VolumetricModel st91(double kappa, double rho0 = 1000.0);
  static VolumetricModel m94(double kappa, double rho0 = 1000.0);
  static VolumetricModel l94(double kappa, double rho0 = 1000.0);

  bool compressible() const { return family != VolFamily::Incompressible; }
};

struct PsiVolEval {
  double psi, dpsi, ddpsi;
};

// Psi_vol and derivatives in J; Unsupported for the incompressible model,
// DomainError for J <= 0
PsiVolEval psi_vol(const VolumetricModel& m, double J);

struct GVolEval {
  double G;
  double dG;   // = J at the transform optimum
  double d2G;
  double rho;
  double beta;  // isothermal compressibility (drho/dP)/rho
};

// G_vol and the constitutive relations; DomainError outside the family's
// valid pressure domain (e.g. P >= kappa for the quadratic model)
GVolEval g_vol(const VolumetricModel& m, double P);

// Verifies G_vol(P) = inf_J { Psi_vol(J) + P J } by an internal 1-D
// minimization at each sampled P; returns the largest |defect|.
double legendre_check(const VolumetricModel& m, std::span<const double> P_samples);

// Appendix-style families without a closed-form G_vol; Psi_vol only.
enum class SeriesVolFamily { ANSYS2000, HN03, O72 };
double psi_vol_series_family(SeriesVolFamily f, double kappa, double J, double gamma = 2.0);

}  // namespace viscokit
