#include "viscokit/hyperelastic.hpp"

#include <cmath>

#include "viscokit/errors.hpp"

namespace viscokit {

HillClassSpec make_hill_spec(std::vector<HillTerm> terms) {
  if (terms.empty()) throw DomainError("make_hill_spec: at least one quadratic term required");
  for (const auto& t : terms)
    if (!(t.mu > 0.0)) throw DomainError("make_hill_spec: shear moduli must be positive");
  return HillClassSpec{std::move(terms)};
}

EightChainSpec make_eight_chain_spec(double mu, double Nchain) {
  if (!(mu > 0.0)) throw DomainError("make_eight_chain_spec: mu must be positive");
  if (!(Nchain > 1.0)) throw DomainError("make_eight_chain_spec: N must exceed 1");
  return EightChainSpec{mu, Nchain};
}

double inv_langevin(double x) { return inv_langevin_d(x).value; }

InvLangevinEval inv_langevin_d(double x) {
  if (!(std::abs(x) < 1.0)) throw DomainError("inv_langevin: argument must satisfy |x| < 1");
  const double x2 = x * x;
  const double om = 1.0 - x2;
  // phi(x) = invL(x)/x
  const double phi = (15.0 - (6.0 * x2 + x2 * x2 - 2.0 * x2 * x2 * x2)) / (5.0 * om);
  const double dphi = 2.0 * x * (9.0 - 2.0 * x2 + 7.0 * x2 * x2 - 4.0 * x2 * x2 * x2) / (5.0 * om * om);
  return {x * phi, phi + x * dphi};
}

StressTangent hill_stress_tangent(const HillClassSpec& spec, const SymTensor2& Ctil,
                                  bool check_unimodular) {
  const double det = Ctil.det();
  if (!(det > 0.0)) throw NotSPD("hill_stress_tangent: Ctil must be SPD");
  if (check_unimodular && std::abs(det - 1.0) > 1e-10)
    throw UnimodularViolation("hill_stress_tangent: det Ctil deviates from 1");

  StressTangent out;
  for (const auto& term : spec.terms) {
    const StrainKit kit = build_strain_kit(Ctil, term.sf);
    const SymTensor2 T = term.mu * kit.E;
    out.S += ddot(T, kit.Q);
    out.C += term.mu * ddot(kit.Q.transpose(), kit.Q) + ddot(T, kit.L);
  }
  return out;
}

double hill_energy(const HillClassSpec& spec, const SymTensor2& Ctil) {
  double g = 0.0;
  for (const auto& term : spec.terms) {
    const SymTensor2 E = generalized_strain(Ctil, term.sf);
    g += 0.5 * term.mu * ddot(E, E);
  }
  return g;
}

namespace {

// ln(L / sinh L), stable for large L
double log_l_over_sinh(double L) {
  if (L < 1e-8) return 0.0;  // L/sinh L -> 1
  if (L > 30.0) return std::log(2.0 * L) - L;  // sinh L ~ e^L / 2
  return std::log(L / std::sinh(L));
}

double network_stretch(double I1, double N) {
  const double lam = std::sqrt(I1 / (3.0 * N));
  if (!(lam < 1.0)) throw ChainLimit("eight-chain: network stretch reached the locking limit");
  return lam;
}

}  // namespace

StressTangent eightchain_equilibrium(const EightChainSpec& spec, const SymTensor2& C) {
  const double I1 = C.trace();
  const double lam = network_stretch(I1, spec.Nchain);
  const SymTensor2 Cinv = C.inverse();
  StressTangent out;
  out.S = eightchain_se(spec, C, Cinv);
  out.C = eightchain_se_tangent(spec, C, Cinv);
  (void)lam;
  return out;
}

double eightchain_energy(const EightChainSpec& spec, const SymTensor2& C) {
  const double I1 = C.trace();
  const double lam = network_stretch(I1, spec.Nchain);
  const double L = inv_langevin(lam);
  const double Lref = inv_langevin(1.0 / std::sqrt(spec.Nchain));
  const double J = std::sqrt(C.det());
  return spec.mu * spec.Nchain * (lam * L + log_l_over_sinh(L)) -
         spec.mu * std::sqrt(spec.Nchain) / 3.0 * Lref * std::log(J);
}

SymTensor2 eightchain_se(const EightChainSpec& spec, const SymTensor2& Ce, const SymTensor2& Ce_inv) {
  const double lam = network_stretch(Ce.trace(), spec.Nchain);
  const double L = inv_langevin(lam);
  const double Lref = inv_langevin(1.0 / std::sqrt(spec.Nchain));
  return (spec.mu / (3.0 * lam) * L) * SymTensor2::identity() -
         (spec.mu * std::sqrt(spec.Nchain) / 3.0 * Lref) * Ce_inv;
}

Tensor4 eightchain_se_tangent(const EightChainSpec& spec, const SymTensor2& Ce, const SymTensor2& Ce_inv) {
  const double lam = network_stretch(Ce.trace(), spec.Nchain);
  const InvLangevinEval L = inv_langevin_d(lam);
  const double Lref = inv_langevin(1.0 / std::sqrt(spec.Nchain));
  // d(invL(lam)/lam)/dlam
  const double dphi = (L.derivative - L.value / lam) / lam;
  const SymTensor2 I = SymTensor2::identity();
  Tensor4 t = (spec.mu / (9.0 * spec.Nchain * lam) * dphi) * otimes(I, I);
  t += (2.0 * spec.mu * std::sqrt(spec.Nchain) / 3.0 * Lref) * odot(Ce_inv, Ce_inv);
  return t;
}

SymTensor2 se_invariant_based(double dU_dI1, double dU_dI2, double dU_dI3, const SymTensor2& Ce) {
  const double I1 = Ce.trace();
  const double I3 = Ce.det();
  if (!(I3 > 0.0)) throw NotSPD("se_invariant_based: Ce must be SPD");
  const SymTensor2 Ce_inv = Ce.inverse();
  SymTensor2 s = 2.0 * (dU_dI1 + I1 * dU_dI2) * SymTensor2::identity();
  s -= 2.0 * dU_dI2 * Ce;
  s += 2.0 * I3 * dU_dI3 * Ce_inv;
  return s;
}

SymTensor2 se_valanis_landel(const std::function<double(double)>& dpw, const ElasticKit& kit) {
  SymTensor2 s;
  for (int a = 0; a < 3; ++a) {
    const double lam = kit.lambda[static_cast<std::size_t>(a)];
    s += (dpw(lam) / lam) * kit.spec.projector(a);
  }
  return s;
}

}  // namespace viscokit
