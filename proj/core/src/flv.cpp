#include "viscokit/flv.hpp"

#include <cmath>

#include "viscokit/errors.hpp"

namespace viscokit {

FLVBranch make_flv_branch(double mu, double tau, ScaleFunction sf) {
  if (!(mu > 0.0)) throw DomainError("make_flv_branch: mu must be positive");
  if (!(tau > 0.0)) throw DomainError("make_flv_branch: tau must be positive");
  return FLVBranch{mu, tau, sf};
}

FLVState flv_init(const std::vector<FLVBranch>& branches, const SymTensor2& Ctil0) {
  FLVState s;
  s.reserve(branches.size());
  for (const auto& b : branches) s.push_back({SymTensor2{}, generalized_strain(Ctil0, b.sf)});
  return s;
}

FLVState flv_step(const std::vector<FLVBranch>& branches, const FLVState& state,
                  const SymTensor2& Ctil_next, double dt) {
  if (dt < 0.0) throw DomainError("flv_step: dt must be non-negative");
  FLVState out;
  out.reserve(branches.size());
  for (std::size_t a = 0; a < branches.size(); ++a) {
    const auto& b = branches[a];
    const SymTensor2 E_next = generalized_strain(Ctil_next, b.sf);
    const double decay = std::exp(-dt / b.tau);
    const double mid = std::exp(-0.5 * dt / b.tau);
    out.push_back({decay * state[a].T + (mid * b.mu) * (E_next - state[a].Etil), E_next});
  }
  return out;
}

FlvStress flv_stress(const std::vector<FLVBranch>& branches, const HillClassSpec& equilibrium,
                     const FLVState& state_next, const SymTensor2& C_next, double P) {
  const IsochoricSplit split = isochoric_split(C_next);
  const SymTensor2 Cinv = C_next.inverse();
  const double Jm23 = std::pow(split.J, -2.0 / 3.0);

  SymTensor2 Stil_inf = hill_stress_tangent(equilibrium, split.Ctil, /*check_unimodular=*/false).S;
  SymTensor2 Stil_neq;
  for (std::size_t a = 0; a < branches.size(); ++a) {
    const StrainKit kit = build_strain_kit(split.Ctil, branches[a].sf);
    Stil_neq += ddot(state_next[a].T, kit.Q);
  }

  // deviatoric projection S_ich = J^{-2/3} P : Stil
  const auto project = [&](const SymTensor2& Stil) {
    return Jm23 * (Stil - (ddot(Stil, C_next) / 3.0) * Cinv);
  };

  FlvStress out;
  out.S_inf_ich = project(Stil_inf);
  out.S_neq_ich = project(Stil_neq);
  out.S_vol = (-split.J * P) * Cinv;
  out.S = out.S_inf_ich + out.S_neq_ich + out.S_vol;
  return out;
}

Tensor4 flv_tangent(const std::vector<FLVBranch>& branches, const HillClassSpec& equilibrium,
                    const FLVState& state_next, const SymTensor2& C_next, double dt) {
  const IsochoricSplit split = isochoric_split(C_next);
  const SymTensor2 Cinv = C_next.inverse();
  const double Jm23 = std::pow(split.J, -2.0 / 3.0);
  const double Jm43 = Jm23 * Jm23;

  // fictitious tensors on the unimodular configuration
  const StressTangent eq = hill_stress_tangent(equilibrium, split.Ctil, /*check_unimodular=*/false);
  SymTensor2 Stil = eq.S;
  Tensor4 Ctil_core = eq.C;
  for (std::size_t a = 0; a < branches.size(); ++a) {
    const auto& b = branches[a];
    const StrainKit kit = build_strain_kit(split.Ctil, b.sf);
    Stil += ddot(state_next[a].T, kit.Q);
    // algorithmic modulus: mu exp(-dt/2tau) in place of the equilibrium mu
    const double mu_alg = b.mu * std::exp(-0.5 * dt / b.tau);
    Ctil_core += mu_alg * ddot(kit.Q.transpose(), kit.Q) + ddot(state_next[a].T, kit.L);
  }

  const SymTensor2 S_ich = Jm23 * (Stil - (ddot(Stil, C_next) / 3.0) * Cinv);

  const Tensor4 I4 = Tensor4::identity();
  const Tensor4 P = I4 - (1.0 / 3.0) * otimes(Cinv, C_next);
  const Tensor4 Pt = I4 - (1.0 / 3.0) * otimes(C_next, Cinv);
  const Tensor4 Ptil = odot(Cinv, Cinv) - (1.0 / 3.0) * otimes(Cinv, Cinv);

  Tensor4 C = ddot(ddot(P, Jm43 * Ctil_core), Pt);
  C += (2.0 / 3.0) * ddot(Jm23 * Stil, C_next) * Ptil;
  C -= (2.0 / 3.0) * (otimes(Cinv, S_ich) + otimes(S_ich, Cinv));
  return C;
}

SymTensor2 flv_step_Ev(const FLVBranch& branch, const SymTensor2& Ev_n, const SymTensor2& Etil_n,
                       const SymTensor2& Etil_next, double dt) {
  const double decay = std::exp(-dt / branch.tau);
  return decay * Ev_n + 0.5 * (1.0 - decay) * (Etil_n + Etil_next);
}

}  // namespace viscokit
