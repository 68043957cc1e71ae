#include "viscokit/micromech.hpp"

#include <cmath>

#include "viscokit/errors.hpp"

namespace viscokit {

MicroBranch make_micro_branch(double mu, double Nchain, double eta, ScaleFunction sf,
                              EvolutionScheme scheme) {
  if (!(mu > 0.0)) throw DomainError("make_micro_branch: mu must be positive");
  if (!(Nchain > 1.0)) throw DomainError("make_micro_branch: N must exceed 1");
  if (!(eta > 0.0)) throw DomainError("make_micro_branch: eta must be positive");
  if (!sf.coercive())
    throw DomainError("make_micro_branch: the elastic strain requires a coercive scale function");
  return MicroBranch{mu, Nchain, eta, sf, scheme};
}

MicroKits micro_residual(const MicroBranch& b, const SymTensor2& Ev_trial, const SymTensor2& Ev_n,
                         const SymTensor2& E_n, const SymTensor2& E_next, double dt) {
  MicroKits k;
  k.kit_n = build_elastic_kit(E_n - Ev_n, b.sf);
  k.kit_next = build_elastic_kit(E_next - Ev_trial, b.sf);

  if (b.scheme == EvolutionScheme::Midpoint) {
    k.Ce_mid = 0.5 * (k.kit_n.Ce + k.kit_next.Ce);
    // the midpoint kits are functions of the averaged elastic deformation
    const Spectral3 smid = spectral_decompose(k.Ce_mid, /*spd_required=*/true);
    SymTensor2 Ee_mid;
    {
      std::array<double, 3> w{};
      for (int a = 0; a < 3; ++a)
        w[static_cast<std::size_t>(a)] =
            b.sf.value(std::sqrt(smid.eigenvalues[static_cast<std::size_t>(a)]));
      Ee_mid = spectral_apply(smid, w);
    }
    k.kit_mid = build_elastic_kit(Ee_mid, b.sf);
  } else {
    k.kit_mid = k.kit_next;
    k.Ce_mid = k.kit_next.Ce;
  }

  const EightChainSpec chain{b.mu, b.Nchain};
  k.lam_mid = std::sqrt(k.Ce_mid.trace() / (3.0 * b.Nchain));
  k.Se_mid = eightchain_se(chain, k.kit_mid.Ce, k.kit_mid.Ce_inv);

  k.R = Ev_trial - Ev_n - (dt / b.eta) * ddot(k.Se_mid, k.kit_mid.Qe_inv);
  return k;
}

Tensor4 micro_K(const MicroBranch& b, const MicroKits& kits, double dt) {
  const EightChainSpec chain{b.mu, b.Nchain};
  const Tensor4 Ce_tan = eightchain_se_tangent(chain, kits.kit_mid.Ce, kits.kit_mid.Ce_inv);
  const Tensor4 SeK = ddot(kits.Se_mid, kits.kit_mid.Ke);

  Tensor4 K = Tensor4::identity();
  const double f = dt / b.eta;
  if (b.scheme == EvolutionScheme::Midpoint) {
    K += f * ddot(ddot(kits.kit_mid.Qe_inv.transpose(), 0.5 * Ce_tan), kits.kit_next.Qe_inv);
    K += f * ddot(ddot(SeK, kits.kit_mid.Qe), kits.kit_next.Qe_inv);
  } else {
    K += f * ddot(ddot(kits.kit_next.Qe_inv.transpose(), Ce_tan), kits.kit_next.Qe_inv);
    K += (2.0 * f) * SeK;
  }
  return K;
}

MicroSolveResult micro_local_solve(const MicroBranch& b, const MicroState& state_n,
                                   const SymTensor2& E_next, double dt, double tol_r, double tol_a,
                                   int i_max) {
  MicroSolveResult out;
  out.Ev = state_n.Ev;  // predictor
  out.kits = micro_residual(b, out.Ev, state_n.Ev, state_n.E_n, E_next, dt);

  double rnorm = out.kits.R.norm();
  const double r0 = rnorm;
  out.report.residual_history.push_back(rnorm);

  for (int i = 0; i < i_max; ++i) {
    if (rnorm <= tol_a || (r0 > 0.0 && rnorm / r0 <= tol_r)) {
      out.report.converged = true;
      break;
    }
    const Tensor4 K = micro_K(b, out.kits, dt);
    SymTensor2 dEv = solve(K, out.kits.R);
    dEv *= -1.0;

    // step halving when the residual grows (the pure Newton step can
    // overshoot into the inverse-Langevin pole near chain locking)
    SymTensor2 Ev_new;
    MicroKits kits_new;
    double rnew = 0.0;
    bool accepted = false;
    double alpha = 1.0;
    for (int h = 0; h <= 8; ++h) {
      Ev_new = out.Ev + alpha * dEv;
      try {
        kits_new = micro_residual(b, Ev_new, state_n.Ev, state_n.E_n, E_next, dt);
        rnew = kits_new.R.norm();
      } catch (const Error&) {
        alpha *= 0.5;
        continue;
      }
      if (rnew < rnorm || h == 8) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) throw NoConvergence("micro_local_solve: line search failed");

    out.Ev = Ev_new;
    out.kits = kits_new;
    rnorm = rnew;
    out.report.iterations = i + 1;
    out.report.residual_history.push_back(rnorm);
  }

  out.report.final_residual = rnorm;
  if (!out.report.converged) {
    if (rnorm <= tol_a || (r0 > 0.0 && rnorm / r0 <= tol_r))
      out.report.converged = true;
    else
      throw NoConvergence("micro_local_solve: no convergence within the iteration budget");
  }
  return out;
}

Tensor4 micro_H_solve(const Tensor4& K, const Tensor4& Q_next) {
  const Tensor4 rhs = ddot(K - Tensor4::identity(), Q_next);
  return solve(K, rhs);
}

MicroStepData micro_step(const MicroBranch& b, const MicroState& state_n, const SymTensor2& C_next,
                         double dt, double tol_r, double tol_a, int i_max) {
  MicroStepData d;
  d.C_next = C_next;
  d.total_kit = build_strain_kit(C_next, b.sf);
  d.solve = micro_local_solve(b, state_n, d.total_kit.E, dt, tol_r, tol_a, i_max);
  d.dt = dt;
  return d;
}

MicroBranchStress micro_branch_stress(const MicroBranch& b, const MicroStepData& step,
                                      bool need_tangent) {
  const EightChainSpec chain{b.mu, b.Nchain};
  const ElasticKit& ke = step.solve.kits.kit_next;
  const SymTensor2 Se = eightchain_se(chain, ke.Ce, ke.Ce_inv);

  MicroBranchStress out;
  out.Tneq = ddot(Se, ke.Qe_inv);
  out.S_neq = ddot(out.Tneq, step.total_kit.Q);

  if (need_tangent) {
    const Tensor4 Ce_tan = eightchain_se_tangent(chain, ke.Ce, ke.Ce_inv);
    const Tensor4 K = micro_K(b, step.solve.kits, step.dt);
    const Tensor4 H = micro_H_solve(K, step.total_kit.Q);
    const Tensor4 inner =
        ddot(ddot(ke.Qe_inv.transpose(), Ce_tan), ke.Qe_inv) + 2.0 * ddot(Se, ke.Ke);
    out.C_neq = ddot(ddot(step.total_kit.Q.transpose(), inner), step.total_kit.Q - H);
    out.C_neq += ddot(out.Tneq, step.total_kit.L);
  }
  return out;
}

MicroStressTangent micro_stress_tangent(const MicroBranch& b, const EightChainSpec& equilibrium,
                                        const MicroStepData& step, double P, bool need_tangent) {
  const MicroBranchStress br = micro_branch_stress(b, step, need_tangent);
  const StressTangent eq = eightchain_equilibrium(equilibrium, step.C_next);

  MicroStressTangent out;
  out.Tneq = br.Tneq;
  out.S_inf = eq.S;
  const SymTensor2 Cinv = step.C_next.inverse();
  const double J = std::sqrt(step.C_next.det());
  out.S = out.S_inf + br.S_neq - (J * P) * Cinv;
  if (need_tangent) out.C_a = eq.C + br.C_neq;
  return out;
}

}  // namespace viscokit
