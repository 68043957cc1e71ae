#include "viscokit/strain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "viscokit/errors.hpp"

namespace viscokit {

ScaleFunction ScaleFunction::seth_hill(double m) {
  if (m == 0.0) throw DomainError("seth_hill: m must be nonzero (m -> 0 is the Hencky strain)");
  return {StrainFamily::SethHill, m, 0.0};
}

ScaleFunction ScaleFunction::hencky() { return {StrainFamily::Hencky, 0.0, 0.0}; }

ScaleFunction ScaleFunction::curnier_rakotomanana(double m, double n) {
  // m n > 0 keeps E' > 0 on all of (0, inf); opposite signs break regularity
  if (!(m * n > 0.0)) throw DomainError("curnier_rakotomanana: requires m n > 0");
  return {StrainFamily::CurnierRakotomanana, m, n};
}

ScaleFunction ScaleFunction::curnier_zysset(double m) {
  if (!(m >= -2.0 && m <= 2.0)) throw DomainError("curnier_zysset: requires -2 <= m <= 2");
  return {StrainFamily::CurnierZysset, m, 0.0};
}

ScaleFunction ScaleFunction::darijani_naghdabadi(double m, double n) {
  if (!(m > 0.0 && n > 0.0)) throw DomainError("darijani_naghdabadi: requires m, n > 0");
  return {StrainFamily::DarijaniNaghdabadi, m, n};
}

bool ScaleFunction::coercive() const { return family_ != StrainFamily::SethHill; }

ScaleFunction::Eval ScaleFunction::eval(double lam) const {
  if (!(lam > 0.0)) throw DomainError("ScaleFunction::eval: stretch must be positive");
  Eval r{};
  switch (family_) {
    case StrainFamily::SethHill: {
      r.E = std::expm1(m_ * std::log(lam)) / m_;
      r.dE = std::pow(lam, m_ - 1.0);
      r.ddE = (m_ - 1.0) * std::pow(lam, m_ - 2.0);
      break;
    }
    case StrainFamily::Hencky: {
      r.E = std::log(lam);
      r.dE = 1.0 / lam;
      r.ddE = -1.0 / (lam * lam);
      break;
    }
    case StrainFamily::CurnierRakotomanana: {
      const double s = m_ + n_;
      r.E = (std::pow(lam, m_) - std::pow(lam, -n_)) / s;
      r.dE = (m_ * std::pow(lam, m_ - 1.0) + n_ * std::pow(lam, -n_ - 1.0)) / s;
      r.ddE = (m_ * (m_ - 1.0) * std::pow(lam, m_ - 2.0) - n_ * (n_ + 1.0) * std::pow(lam, -n_ - 2.0)) / s;
      break;
    }
    case StrainFamily::CurnierZysset: {
      const double l2 = lam * lam, li2 = 1.0 / l2;
      r.E = ((2.0 + m_) * l2 - (2.0 - m_) * li2 - 2.0 * m_) / 8.0;
      r.dE = ((2.0 + m_) * lam + (2.0 - m_) / (l2 * lam)) / 4.0;
      r.ddE = ((2.0 + m_) - 3.0 * (2.0 - m_) * li2 * li2) / 4.0;
      break;
    }
    case StrainFamily::DarijaniNaghdabadi: {
      const double s = m_ + n_;
      const double e1 = std::exp(m_ * (lam - 1.0));
      const double e2 = std::exp(n_ * (1.0 / lam - 1.0));
      const double l2 = lam * lam, l3 = l2 * lam, l4 = l2 * l2;
      r.E = (e1 - e2) / s;
      r.dE = (m_ * e1 + (n_ / l2) * e2) / s;
      r.ddE = (m_ * m_ * e1 - (2.0 * n_ / l3 + n_ * n_ / l4) * e2) / s;
      break;
    }
  }
  return r;
}

double ScaleFunction::inverse(double w) const {
  // E is strictly increasing in t = log(lambda); bracket, then safeguarded Newton
  const auto val = [&](double t) { return value(std::exp(t)); };

  double tlo = 0.0, thi = 0.0;
  double flo = -w, fhi = -w;  // E(1) = 0
  if (w == 0.0) return 1.0;
  double step = 1.0;
  const double tmax = 320.0;  // exp(\pm 320) covers every representable stretch
  if (w > 0.0) {
    while (fhi < 0.0) {
      thi += step;
      step *= 2.0;
      const double f = val(thi) - w;
      fhi = std::isnan(f) ? fhi : f;
      if (thi > tmax && fhi < 0.0) throw RangeError("ScaleFunction::inverse: value above the range of E");
    }
  } else {
    while (flo > 0.0) {
      tlo -= step;
      step *= 2.0;
      const double f = val(tlo) - w;
      flo = std::isnan(f) ? flo : f;
      if (tlo < -tmax && flo > 0.0) throw RangeError("ScaleFunction::inverse: value below the range of E");
    }
  }

  double t = 0.5 * (tlo + thi);
  const double ftol = 1e-13 * std::max(1.0, std::abs(w));
  for (int it = 0; it < 200; ++it) {
    const double lam = std::exp(t);
    const Eval e = eval(lam);
    const double f = e.E - w;
    if (std::abs(f) <= ftol) return lam;
    if (f > 0.0)
      thi = t;
    else
      tlo = t;
    const double dfdt = e.dE * lam;  // d/dt E(exp t)
    double tn = t - f / dfdt;
    if (!(tn > tlo && tn < thi) || !std::isfinite(tn)) tn = 0.5 * (tlo + thi);
    if (tn == t) return lam;
    t = tn;
  }
  throw NoConvergence("ScaleFunction::inverse: Newton/bisection stalled");
}

SymTensor2 generalized_strain(const SymTensor2& C, const ScaleFunction& sf) {
  const Spectral3 s = spectral_decompose(C, /*spd_required=*/true);
  std::array<double, 3> f{};
  for (int a = 0; a < 3; ++a)
    f[static_cast<std::size_t>(a)] = sf.value(std::sqrt(s.eigenvalues[static_cast<std::size_t>(a)]));
  return spectral_apply(s, f);
}

StrainKit build_strain_kit(const SymTensor2& C, const ScaleFunction& sf) {
  StrainKit kit;
  kit.spec = spectral_decompose(C, /*spd_required=*/true);

  // E as an isotropic function of C: nodes are the eigenvalues y = lambda^2
  // with generator f(y) = E(sqrt(y))
  SpectralFn fn;
  for (int a = 0; a < 3; ++a) {
    const auto ia = static_cast<std::size_t>(a);
    const double y = kit.spec.eigenvalues[ia];
    const double lam = std::sqrt(y);
    kit.lambda[ia] = lam;
    const ScaleFunction::Eval e = sf.eval(lam);
    fn.f[ia] = e.E;
    fn.df[ia] = e.dE / (2.0 * lam);
    fn.ddf[ia] = (lam * e.ddE - e.dE) / (4.0 * lam * lam * lam);
  }
  kit.E = spectral_apply(kit.spec, fn.f);
  kit.Q = 2.0 * spectral_first_derivative(kit.spec, kit.spec.eigenvalues, fn);
  kit.L = 4.0 * spectral_second_derivative(kit.spec, kit.spec.eigenvalues, fn);
  return kit;
}

ElasticKit build_elastic_kit(const SymTensor2& Ee, const ScaleFunction& sf) {
  ElasticKit kit;
  kit.Ee = Ee;
  kit.spec = spectral_decompose(Ee, /*spd_required=*/false);

  // Ce as an isotropic function of Ee: nodes are the strain eigenvalues w
  // with generator psi(w) = (E^-1(w))^2
  SpectralFn psi;
  std::array<double, 3> y{};
  SpectralFn fwd;  // generator of Ee as a function of Ce, sampled at y = lambda^2
  for (int a = 0; a < 3; ++a) {
    const auto ia = static_cast<std::size_t>(a);
    const double w = kit.spec.eigenvalues[ia];
    const double lam = sf.inverse(w);
    kit.lambda[ia] = lam;
    const ScaleFunction::Eval e = sf.eval(lam);
    psi.f[ia] = lam * lam;
    psi.df[ia] = 2.0 * lam / e.dE;
    psi.ddf[ia] = 2.0 / (e.dE * e.dE) - 2.0 * lam * e.ddE / (e.dE * e.dE * e.dE);
    y[ia] = lam * lam;
    fwd.f[ia] = w;
    fwd.df[ia] = e.dE / (2.0 * lam);
    fwd.ddf[ia] = (lam * e.ddE - e.dE) / (4.0 * lam * lam * lam);
  }
  kit.Ce = spectral_apply(kit.spec, psi.f);
  kit.Ce_inv = kit.Ce.inverse();
  kit.Je = kit.lambda[0] * kit.lambda[1] * kit.lambda[2];
  kit.Qe = 2.0 * spectral_first_derivative(kit.spec, y, fwd);
  kit.Qe_inv = 0.5 * spectral_first_derivative(kit.spec, kit.spec.eigenvalues, psi);
  kit.Ke = 0.25 * spectral_second_derivative(kit.spec, kit.spec.eigenvalues, psi);
  return kit;
}

IsochoricSplit isochoric_split(const SymTensor2& C) {
  const double detC = C.det();
  if (!(detC > 0.0)) throw NotSPD("isochoric_split: det C must be positive");
  const double J = std::sqrt(detC);
  IsochoricSplit r{J, C};
  r.Ctil *= std::pow(J, -2.0 / 3.0);
  return r;
}

}  // namespace viscokit
