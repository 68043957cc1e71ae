// Nonlinear micromechanical branch: eight-chain configurational energy on
// the elastic deformation tensor Ce, midpoint (or backward-Euler) evolution
// of the viscous strain with a local Newton-Raphson solve, and the
// consistent tangent pieces K and H.

#pragma once

#include <vector>

#include "viscokit/hyperelastic.hpp"
#include "viscokit/strain.hpp"
#include "viscokit/tensor.hpp"

namespace viscokit {

enum class EvolutionScheme { Midpoint, BackwardEuler };

struct MicroBranch {
  double mu;      // shear modulus (kPa)
  double Nchain;  // segment count, > 1
  double eta;     // viscosity (kPa s)
  ScaleFunction sf;  // coercive scale function defining E and Ee
  EvolutionScheme scheme = EvolutionScheme::Midpoint;
};
MicroBranch make_micro_branch(double mu, double Nchain, double eta, ScaleFunction sf,
                              EvolutionScheme scheme = EvolutionScheme::Midpoint);

struct MicroState {
  SymTensor2 Ev;   // internal variable
  SymTensor2 E_n;  // total-strain snapshot at t_n (branch scale function)
};

struct NewtonReport {
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

// Everything micro_K and the residual share at a trial internal variable
struct MicroKits {
  ElasticKit kit_n, kit_next, kit_mid;
  SymTensor2 Ce_mid;
  SymTensor2 Se_mid;      // midpoint (or end-point for backward Euler) elastic stress
  double lam_mid = 0.0;   // non-equilibrium network stretch at the quadrature point
  SymTensor2 R;           // residual
};

// R = Ev_trial - Ev_n - (dt/eta) Se : Qe^-1 at the scheme's quadrature point
MicroKits micro_residual(const MicroBranch& b, const SymTensor2& Ev_trial, const SymTensor2& Ev_n,
                         const SymTensor2& E_n, const SymTensor2& E_next, double dt);

// K = dR/dEv, minor symmetric, -> identity as dt -> 0
Tensor4 micro_K(const MicroBranch& b, const MicroKits& kits, double dt);

struct MicroSolveResult {
  SymTensor2 Ev;
  NewtonReport report;
  MicroKits kits;  // kits at the converged state
};

// local Newton-Raphson with step halving on residual growth
MicroSolveResult micro_local_solve(const MicroBranch& b, const MicroState& state_n,
                                   const SymTensor2& E_next, double dt, double tol_r = 1e-12,
                                   double tol_a = 1e-12, int i_max = 50);

// solves K : H = (K - I) : Q for H = 2 dEv/dC through the converged step
Tensor4 micro_H_solve(const Tensor4& K, const Tensor4& Q_next);

struct MicroStressTangent {
  SymTensor2 S;      // S_inf + Tneq : Q - J P C^-1
  SymTensor2 S_inf;
  SymTensor2 Tneq;
  Tensor4 C_a;       // tangent of S_inf + Tneq : Q (volumetric part excluded)
};

struct MicroStepData {
  SymTensor2 C_next;
  StrainKit total_kit;  // strain kit of C_next for the branch scale function
  MicroSolveResult solve;
  double dt = 0.0;
};

// convenience: solve the step from (state_n, C_next)
MicroStepData micro_step(const MicroBranch& b, const MicroState& state_n, const SymTensor2& C_next,
                         double dt, double tol_r = 1e-12, double tol_a = 1e-12, int i_max = 50);

MicroStressTangent micro_stress_tangent(const MicroBranch& b, const EightChainSpec& equilibrium,
                                        const MicroStepData& step, double P,
                                        bool need_tangent = true);

// non-equilibrium contribution of one branch alone
struct MicroBranchStress {
  SymTensor2 Tneq;   // Se : Qe^-1 at t_{n+1}
  SymTensor2 S_neq;  // Tneq : Q
  Tensor4 C_neq;     // 2 dS_neq/dC through the converged local solve
};
MicroBranchStress micro_branch_stress(const MicroBranch& b, const MicroStepData& step,
                                      bool need_tangent = true);

}  // namespace viscokit
