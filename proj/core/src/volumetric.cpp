#include "viscokit/volumetric.hpp"

#include <algorithm>
#include <cmath>

namespace viscokit {

namespace {

VolumetricModel make(VolFamily f, double kappa, double rho0) {
  if (f != VolFamily::Incompressible && !(kappa > 0.0))
    throw DomainError("VolumetricModel: bulk modulus must be positive");
  if (!(rho0 > 0.0)) throw DomainError("VolumetricModel: reference density must be positive");
  return VolumetricModel{f, kappa, rho0};
}

}  // namespace

VolumetricModel VolumetricModel::incompressible(double rho0) { return make(VolFamily::Incompressible, 0.0, rho0); }
VolumetricModel VolumetricModel::quadratic(double kappa, double rho0) { return make(VolFamily::Quadratic, kappa, rho0); }
VolumetricModel VolumetricModel::st91(double kappa, double rho0) { return make(VolFamily::ST91, kappa, rho0); }
VolumetricModel VolumetricModel::m94(double kappa, double rho0) { return make(VolFamily::M94, kappa, rho0); }
VolumetricModel VolumetricModel::l94(double kappa, double rho0) { return make(VolFamily::L94, kappa, rho0); }

PsiVolEval psi_vol(const VolumetricModel& m, double J) {
  if (m.family == VolFamily::Incompressible)
    throw Unsupported("psi_vol: the incompressible model has no Helmholtz volumetric energy");
  if (!(J > 0.0)) throw DomainError("psi_vol: J must be positive");
  const double k = m.kappa;
  switch (m.family) {
    case VolFamily::Quadratic:
      return {0.5 * k * (J - 1.0) * (J - 1.0), k * (J - 1.0), k};
    case VolFamily::ST91:
      return {0.25 * k * (J * J - 2.0 * std::log(J) - 1.0), 0.5 * k * (J - 1.0 / J),
              0.5 * k * (1.0 + 1.0 / (J * J))};
    case VolFamily::M94:
      return {k * (J - std::log(J) - 1.0), k * (1.0 - 1.0 / J), k / (J * J)};
    case VolFamily::L94:
      return {k * (J * std::log(J) - J + 1.0), k * std::log(J), k / J};
    case VolFamily::Incompressible:
      break;
  }
  throw Unsupported("psi_vol: unknown family");
}

GVolEval g_vol(const VolumetricModel& m, double P) {
  const double k = m.kappa;
  GVolEval r{};
  switch (m.family) {
    case VolFamily::Incompressible:
      r = {P, 1.0, 0.0, m.rho0, 0.0};
      return r;
    case VolFamily::Quadratic: {
      if (!(P < k)) throw DomainError("g_vol: quadratic model requires P < kappa");
      r.G = P - 0.5 * P * P / k;
      r.dG = 1.0 - P / k;
      r.d2G = -1.0 / k;
      r.rho = m.rho0 / (1.0 - P / k);
      r.beta = 1.0 / (k - P);
      return r;
    }
    case VolFamily::ST91: {
      const double root = std::sqrt(P * P + k * k);
      r.G = (P * root - P * P) / (2.0 * k) - 0.5 * k * std::log((root - P) / k);
      r.dG = (root - P) / k;
      r.d2G = (P / root - 1.0) / k;
      r.rho = m.rho0 * (root + P) / k;
      r.beta = 1.0 / root;
      return r;
    }
    case VolFamily::M94: {
      if (!(P > -k)) throw DomainError("g_vol: M94 model requires P > -kappa");
      r.G = k * std::log1p(P / k);
      r.dG = k / (P + k);
      r.d2G = -k / ((P + k) * (P + k));
      r.rho = m.rho0 * (1.0 + P / k);
      r.beta = 1.0 / (P + k);
      return r;
    }
    case VolFamily::L94: {
      const double e = std::exp(-P / k);
      r.G = k * (1.0 - e);
      r.dG = e;
      r.d2G = -e / k;
      r.rho = m.rho0 / e;
      r.beta = 1.0 / k;
      return r;
    }
  }
  throw Unsupported("g_vol: unknown family");
}

double legendre_check(const VolumetricModel& m, std::span<const double> P_samples) {
  if (!m.compressible()) throw Unsupported("legendre_check: incompressible model has no transform");
  double worst = 0.0;
  for (const double P : P_samples) {
    // minimize Psi(J) + P J: the integrand is strictly convex for the
    // shipped families, so Newton on Psi' + P from the closed-form optimum
    // bracket is safe
    double J = 1.0;
    // expand a bracket on Psi' + P
    double lo = 1e-8, hi = 1.0;
    while (psi_vol(m, hi).dpsi + P < 0.0 && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const PsiVolEval e = psi_vol(m, J);
      const double g = e.dpsi + P;
      if (std::abs(g) <= 1e-14 * std::max(1.0, std::abs(P) + m.kappa)) break;
      if (g > 0.0)
        hi = J;
      else
        lo = J;
      double Jn = J - g / e.ddpsi;
      if (!(Jn > lo && Jn < hi) || !std::isfinite(Jn)) Jn = 0.5 * (lo + hi);
      if (Jn == J) break;
      J = Jn;
    }
    const double numeric = psi_vol(m, J).psi + P * J;
    const double closed = g_vol(m, P).G;
    worst = std::max(worst, std::abs(numeric - closed));
  }
  return worst;
}

double psi_vol_series_family(SeriesVolFamily f, double kappa, double J, double gamma) {
  if (!(J > 0.0)) throw DomainError("psi_vol_series_family: J must be positive");
  switch (f) {
    case SeriesVolFamily::ANSYS2000: {
      const double d = J * J - 1.0 / (J * J);
      return kappa * d * d / 32.0;
    }
    case SeriesVolFamily::HN03:
      return kappa * (std::pow(J, 5.0) + std::pow(J, -5.0) - 2.0) / 50.0;
    case SeriesVolFamily::O72:
      if (!(gamma > 0.0)) throw DomainError("psi_vol_series_family: gamma must be positive");
      return kappa * (gamma * std::log(J) + std::pow(J, -gamma) - 1.0) / (gamma * gamma);
  }
  throw Unsupported("psi_vol_series_family: unknown family");
}

}  // namespace viscokit
