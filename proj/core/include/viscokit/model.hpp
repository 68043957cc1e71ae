// A material definition (equilibrium energy, relaxation branches,
// volumetric law) plus the per-point history it evolves, with assembly of
// total stress and algorithmic tangent from the branch contributions.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "viscokit/flv.hpp"
#include "viscokit/hyperelastic.hpp"
#include "viscokit/micromech.hpp"
#include "viscokit/volumetric.hpp"

namespace viscokit {

struct ViscoModel {
  // Hill-class energies act on the unimodular Ctil (isochoric split);
  // the eight-chain equilibrium acts on the full C.
  std::variant<HillClassSpec, EightChainSpec> equilibrium;
  std::vector<FLVBranch> flv;
  std::vector<MicroBranch> micro;
  VolumetricModel vol = VolumetricModel::incompressible();

  // representative stress scale used to normalize driver residuals
  double modulus_scale() const;
};

struct MaterialState {
  double t = 0.0;
  FLVState flv;
  std::vector<MicroState> micro;
};

MaterialState init_state(const ViscoModel& model, const SymTensor2& C0);

struct MaterialEval {
  MaterialState state;     // advanced history
  SymTensor2 S_a;          // stress without the volumetric part
  Tensor4 C_a;             // 2 dS_a/dC (algorithmic; when requested)
  double J = 1.0;
  SymTensor2 Cinv;
  double phi = 0.0;        // dissipation power density sum_a eta_a |dEv/dt|^2
  std::vector<double> branch_T_norms;  // |T^neq| per branch (flv then micro)
  bool has_tangent = false;

  SymTensor2 stress(double P) const { return S_a - (J * P) * Cinv; }
  SymTensor2 dstress_dP() const { return (-J) * Cinv; }
  // total tangent 2 dS/dC at fixed P
  Tensor4 tangent(double P) const;
};

// advance the history from state_n to C_next over dt and assemble stresses
MaterialEval evaluate_material(const ViscoModel& model, const MaterialState& state_n,
                               const SymTensor2& C_next, double dt, bool need_tangent);

}  // namespace viscokit
