#include "viscokit/model.hpp"

#include <cmath>

namespace viscokit {

double ViscoModel::modulus_scale() const {
  double s = 0.0;
  if (const auto* hill = std::get_if<HillClassSpec>(&equilibrium)) {
    for (const auto& t : hill->terms) s += t.mu;
  } else {
    s += std::get<EightChainSpec>(equilibrium).mu;
  }
  for (const auto& b : flv) s += b.mu;
  for (const auto& b : micro) s += b.mu;
  return s > 0.0 ? s : 1.0;
}

MaterialState init_state(const ViscoModel& model, const SymTensor2& C0) {
  MaterialState s;
  s.t = 0.0;
  const IsochoricSplit split = isochoric_split(C0);
  s.flv = flv_init(model.flv, split.Ctil);
  s.micro.reserve(model.micro.size());
  for (const auto& b : model.micro) s.micro.push_back({SymTensor2{}, generalized_strain(C0, b.sf)});
  return s;
}

Tensor4 MaterialEval::tangent(double P) const {
  // volumetric part at fixed P: 2 d(-J P C^-1)/dC
  Tensor4 t = C_a;
  t += (J * P) * (2.0 * odot(Cinv, Cinv) - otimes(Cinv, Cinv));
  return t;
}

MaterialEval evaluate_material(const ViscoModel& model, const MaterialState& state_n,
                               const SymTensor2& C_next, double dt, bool need_tangent) {
  MaterialEval out;
  out.state.t = state_n.t + dt;
  out.J = std::sqrt(C_next.det());
  out.Cinv = C_next.inverse();
  out.has_tangent = need_tangent;

  const double inv_dt = dt > 0.0 ? 1.0 / dt : 0.0;

  // isochoric part: Hill-class equilibrium (when selected) plus FLV branches
  const IsochoricSplit split = isochoric_split(C_next);
  out.state.flv = flv_step(model.flv, state_n.flv, split.Ctil, dt);

  const HillClassSpec* hill = std::get_if<HillClassSpec>(&model.equilibrium);
  const HillClassSpec empty_hill{};
  const HillClassSpec& eq_hill = hill ? *hill : empty_hill;

  if (hill || !model.flv.empty()) {
    const FlvStress fs = flv_stress(model.flv, eq_hill, out.state.flv, C_next, 0.0);
    out.S_a += fs.S_inf_ich + fs.S_neq_ich;
    if (need_tangent) out.C_a += flv_tangent(model.flv, eq_hill, out.state.flv, C_next, dt);
  }

  for (std::size_t a = 0; a < model.flv.size(); ++a) {
    out.branch_T_norms.push_back(out.state.flv[a].T.norm());
    if (dt > 0.0) {
      // Ev = Etil - T/mu per branch; dissipation from its increment
      const auto& b = model.flv[a];
      const SymTensor2 Ev_n = state_n.flv[a].Etil - (1.0 / b.mu) * state_n.flv[a].T;
      const SymTensor2 Ev_next = out.state.flv[a].Etil - (1.0 / b.mu) * out.state.flv[a].T;
      const SymTensor2 rate = inv_dt * (Ev_next - Ev_n);
      out.phi += b.mu * b.tau * ddot(rate, rate);
    }
  }

  // full-deformation part: eight-chain equilibrium and micromechanical branches
  if (const auto* chain_eq = std::get_if<EightChainSpec>(&model.equilibrium)) {
    const StressTangent eq = eightchain_equilibrium(*chain_eq, C_next);
    out.S_a += eq.S;
    if (need_tangent) out.C_a += eq.C;
  }

  for (std::size_t a = 0; a < model.micro.size(); ++a) {
    const auto& b = model.micro[a];
    const MicroStepData step = micro_step(b, state_n.micro[a], C_next, dt);
    const MicroBranchStress br = micro_branch_stress(b, step, need_tangent);
    out.S_a += br.S_neq;
    if (need_tangent) out.C_a += br.C_neq;

    out.branch_T_norms.push_back(br.Tneq.norm());
    if (dt > 0.0) {
      const SymTensor2 rate = inv_dt * (step.solve.Ev - state_n.micro[a].Ev);
      out.phi += b.eta * ddot(rate, rate);
    }
    out.state.micro.push_back({step.solve.Ev, step.total_kit.E});
  }

  return out;
}

}  // namespace viscokit
