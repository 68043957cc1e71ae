// Equilibrium-branch energies and generic elastic stress forms:
// multi-term quadratic (Hill-class) energies on the isochoric strain,
// the eight-chain network model, and the invariant / Valanis-Landel
// representations of the elastic stress Se used by non-equilibrium
// branches.

#pragma once

#include <functional>
#include <vector>

#include "viscokit/strain.hpp"
#include "viscokit/tensor.hpp"

namespace viscokit {

struct HillTerm {
  double mu;  // shear modulus (kPa)
  ScaleFunction sf;
};

struct HillClassSpec {
  std::vector<HillTerm> terms;
};
HillClassSpec make_hill_spec(std::vector<HillTerm> terms);  // validates mu > 0, >= 1 term

struct EightChainSpec {
  double mu;      // shear modulus (kPa)
  double Nchain;  // chain segment count, > 1
};
EightChainSpec make_eight_chain_spec(double mu, double Nchain);

// inverse Langevin function by the rational approximant
// x (15 - (6x^2 + x^4 - 2x^6)) / (5 (1 - x^2)); DomainError at |x| >= 1
double inv_langevin(double x);
struct InvLangevinEval {
  double value, derivative;
};
InvLangevinEval inv_langevin_d(double x);

struct StressTangent {
  SymTensor2 S;
  Tensor4 C;
};

// Isochoric Hill-class stress Stil = sum_b mu_b Etil_b : Qtil_b and the
// fictitious tangent core 2 dStil/dCtil = sum_b (mu_b Qtil^T:Qtil + T_b:Ltil_b).
// J-scalings are applied by the caller during assembly.  With
// check_unimodular the input must satisfy |det Ctil - 1| <= 1e-10.
StressTangent hill_stress_tangent(const HillClassSpec& spec, const SymTensor2& Ctil,
                                  bool check_unimodular = true);
double hill_energy(const HillClassSpec& spec, const SymTensor2& Ctil);

// Full (non-split) eight-chain equilibrium stress and tangent on C.
// ChainLimit once the relative network stretch reaches 1.
StressTangent eightchain_equilibrium(const EightChainSpec& spec, const SymTensor2& C);
double eightchain_energy(const EightChainSpec& spec, const SymTensor2& C);

// Se of the eight-chain configurational energy as a function of Ce,
// with tangent Ce-derivative 2 dSe/dCe.
SymTensor2 eightchain_se(const EightChainSpec& spec, const SymTensor2& Ce, const SymTensor2& Ce_inv);
Tensor4 eightchain_se_tangent(const EightChainSpec& spec, const SymTensor2& Ce, const SymTensor2& Ce_inv);

// Generic Se forms for phenomenological configurational energies
SymTensor2 se_invariant_based(double dU_dI1, double dU_dI2, double dU_dI3, const SymTensor2& Ce);
SymTensor2 se_valanis_landel(const std::function<double(double)>& dpw, const ElasticKit& kit);

}  // namespace viscokit
