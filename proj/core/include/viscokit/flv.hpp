// Finite-linear-viscoelasticity branches: quadratic configurational energy
// per branch, one-step exponential recurrence for the stress-like internal
// variable, and isochoric stress / algorithmic tangent assembly.

#pragma once

#include <vector>

#include "viscokit/hyperelastic.hpp"
#include "viscokit/strain.hpp"
#include "viscokit/tensor.hpp"

namespace viscokit {

struct FLVBranch {
  double mu;   // shear modulus (kPa)
  double tau;  // relaxation time (s); viscosity eta = mu * tau
  ScaleFunction sf;
};
FLVBranch make_flv_branch(double mu, double tau, ScaleFunction sf);

struct FLVBranchState {
  SymTensor2 T;     // stress-like internal variable (kPa)
  SymTensor2 Etil;  // isochoric strain snapshot
};

using FLVState = std::vector<FLVBranchState>;

// virgin state: T = 0, strain snapshot taken from the initial configuration
FLVState flv_init(const std::vector<FLVBranch>& branches, const SymTensor2& Ctil0);

// T_{n+1} = exp(-dt/tau) T_n + exp(-dt/2tau) mu (Etil_{n+1} - Etil_n)
FLVState flv_step(const std::vector<FLVBranch>& branches, const FLVState& state,
                  const SymTensor2& Ctil_next, double dt);

struct FlvStress {
  SymTensor2 S;          // total = S_inf_ich + S_neq_ich + S_vol
  SymTensor2 S_inf_ich;
  SymTensor2 S_neq_ich;
  SymTensor2 S_vol;      // -J P C^-1
};

FlvStress flv_stress(const std::vector<FLVBranch>& branches, const HillClassSpec& equilibrium,
                     const FLVState& state_next, const SymTensor2& C_next, double P);

// isochoric part of the algorithmic tangent 2 dS_ich/dC at frozen state_n
Tensor4 flv_tangent(const std::vector<FLVBranch>& branches, const HillClassSpec& equilibrium,
                    const FLVState& state_next, const SymTensor2& C_next, double dt);

// midpoint-quadrature recurrence for the viscous strain, provided for
// dissipation accounting and as an alternative state variable
SymTensor2 flv_step_Ev(const FLVBranch& branch, const SymTensor2& Ev_n, const SymTensor2& Etil_n,
                       const SymTensor2& Etil_next, double dt);

}  // namespace viscokit
