#include "viscokit/driver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "viscokit/errors.hpp"

namespace viscokit {

namespace {

constexpr double kResidualTol = 1e-11;  // normalized; spec demands < 1e-10
constexpr int kMaxNewton = 60;

SymTensor2 c_from_F(const std::array<double, 9>& F) {
  SymTensor2 c;
  for (int k = 0; k < 6; ++k) {
    const int i = kRow[static_cast<std::size_t>(k)], j = kCol[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (int p = 0; p < 3; ++p)
      s += F[static_cast<std::size_t>(3 * p + i)] * F[static_cast<std::size_t>(3 * p + j)];
    c[k] = s;
  }
  return c;
}

SymTensor2 cauchy_from(const std::array<double, 9>& F, const SymTensor2& S, double J) {
  // sigma = J^-1 F S F^T
  double fs[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int p = 0; p < 3; ++p) s += F[static_cast<std::size_t>(3 * i + p)] * S(p, j);
      fs[i][j] = s;
    }
  SymTensor2 sig;
  for (int k = 0; k < 6; ++k) {
    const int i = kRow[static_cast<std::size_t>(k)], j = kCol[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (int p = 0; p < 3; ++p) s += fs[i][p] * F[static_cast<std::size_t>(3 * j + p)];
    sig[k] = s / J;
  }
  return sig;
}

// directional derivative of S at fixed state: dS[B] = (1/2) C_tan : B
SymTensor2 dstress(const MaterialEval& ev, double P, const SymTensor2& B) {
  return 0.5 * ddot(ev.tangent(P), B);
}

}  // namespace

double schedule_value(const std::vector<SchedulePoint>& schedule, double t) {
  if (schedule.empty()) throw DomainError("schedule_value: empty schedule");
  if (t <= schedule.front().t) return schedule.front().value;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (t <= schedule[i].t) {
      const double t0 = schedule[i - 1].t, t1 = schedule[i].t;
      const double v0 = schedule[i - 1].value, v1 = schedule[i].value;
      const double w = (t1 > t0) ? (t - t0) / (t1 - t0) : 1.0;
      return v0 + w * (v1 - v0);
    }
  }
  return schedule.back().value;
}

UniaxialStep solve_uniaxial_step(const ViscoModel& model, double lambda_ax,
                                 const MaterialState& state_n, double dt, double lat_guess,
                                 double P_guess) {
  if (!(lambda_ax > 0.0)) throw DomainError("solve_uniaxial_step: stretch must be positive");
  const double mu = model.modulus_scale();
  UniaxialStep out;

  if (!model.vol.compressible()) {
    const double lat = 1.0 / std::sqrt(lambda_ax);
    const SymTensor2 C = SymTensor2::diag(lambda_ax * lambda_ax, lat * lat, lat * lat);
    out.eval = evaluate_material(model, state_n, C, dt, /*need_tangent=*/false);
    // J = 1; the lateral Cauchy stress vanishes iff S_22 = 0
    out.P = out.eval.S_a[1] / out.eval.Cinv[1];
    out.lambda_lat = lat;
    const SymTensor2 S = out.eval.stress(out.P);
    out.nominal_axial = lambda_ax * S[0];
    return out;
  }

  double lat = lat_guess > 0.0 ? lat_guess : 1.0 / std::sqrt(lambda_ax);
  double P = P_guess;
  MaterialEval ev;
  for (int it = 0; it < kMaxNewton; ++it) {
    const SymTensor2 C = SymTensor2::diag(lambda_ax * lambda_ax, lat * lat, lat * lat);
    ev = evaluate_material(model, state_n, C, dt, /*need_tangent=*/true);
    const GVolEval g = g_vol(model.vol, P);
    const SymTensor2 S = ev.stress(P);
    const double r1 = S[1];            // lateral second Piola-Kirchhoff stress
    const double r2 = ev.J - g.dG;     // volumetric constitutive relation
    if (std::abs(r1) <= kResidualTol * mu && std::abs(r2) <= kResidualTol) {
      out.lambda_lat = lat;
      out.P = P;
      out.eval = ev;
      out.nominal_axial = lambda_ax * S[0];
      return out;
    }
    const SymTensor2 dC_dlat = SymTensor2::diag(0.0, 2.0 * lat, 2.0 * lat);
    const SymTensor2 dS_dlat = dstress(ev, P, dC_dlat);
    const double j11 = dS_dlat[1];
    const double j12 = ev.dstress_dP()[1];
    const double j21 = 2.0 * ev.J / lat;
    const double j22 = -g.d2G;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det))
      throw NoConvergence("solve_uniaxial_step: singular Jacobian");
    double dlat = -(r1 * j22 - j12 * r2) / det;
    double dP = -(j11 * r2 - r1 * j21) / det;
    // keep the lateral stretch positive
    if (lat + dlat <= 0.1 * lat) dlat = -0.9 * lat;
    lat += dlat;
    P += dP;
  }
  throw NoConvergence("solve_uniaxial_step: residual " + std::to_string(mu));
}

ShearStep solve_shear_step(const ViscoModel& model, double gamma, const MaterialState& state_n,
                           double dt) {
  // F = I + gamma e1 (x) e2 is isochoric, so both volumetric families admit
  // the explicit P from the out-of-plane stress condition
  SymTensor2 C = SymTensor2::identity();
  C[3] = gamma;          // C_12
  C[1] = 1.0 + gamma * gamma;
  ShearStep out;
  out.eval = evaluate_material(model, state_n, C, dt, /*need_tangent=*/false);

  // sigma_33 = S_33 for this F; enforce sigma_33 = 0
  out.P = out.eval.S_a[2] / (out.eval.J * out.eval.Cinv[2]);
  const SymTensor2 S = out.eval.stress(out.P);
  const std::array<double, 9> F = {1.0, gamma, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  out.traction = cauchy_from(F, S, out.eval.J)[3];
  return out;
}

EquibiaxialStep solve_equibiaxial_step(const ViscoModel& model, double lambda_in,
                                       const MaterialState& state_n, double dt, double thick_guess,
                                       double P_guess) {
  if (!(lambda_in > 0.0)) throw DomainError("solve_equibiaxial_step: stretch must be positive");
  const double mu = model.modulus_scale();
  EquibiaxialStep out;

  if (!model.vol.compressible()) {
    const double lt = 1.0 / (lambda_in * lambda_in);
    const SymTensor2 C = SymTensor2::diag(lambda_in * lambda_in, lambda_in * lambda_in, lt * lt);
    out.eval = evaluate_material(model, state_n, C, dt, /*need_tangent=*/false);
    out.P = out.eval.S_a[2] / out.eval.Cinv[2];
    out.lambda_thickness = lt;
    const SymTensor2 S = out.eval.stress(out.P);
    out.nominal_inplane = lambda_in * S[0];
    return out;
  }

  double lt = thick_guess > 0.0 ? thick_guess : 1.0 / (lambda_in * lambda_in);
  double P = P_guess;
  for (int it = 0; it < kMaxNewton; ++it) {
    const SymTensor2 C = SymTensor2::diag(lambda_in * lambda_in, lambda_in * lambda_in, lt * lt);
    const MaterialEval ev = evaluate_material(model, state_n, C, dt, /*need_tangent=*/true);
    const GVolEval g = g_vol(model.vol, P);
    const SymTensor2 S = ev.stress(P);
    const double r1 = S[2];
    const double r2 = ev.J - g.dG;
    if (std::abs(r1) <= kResidualTol * mu && std::abs(r2) <= kResidualTol) {
      out.lambda_thickness = lt;
      out.P = P;
      out.eval = ev;
      out.nominal_inplane = lambda_in * S[0];
      return out;
    }
    const SymTensor2 dC_dlt = SymTensor2::diag(0.0, 0.0, 2.0 * lt);
    const double j11 = dstress(ev, P, dC_dlt)[2];
    const double j12 = ev.dstress_dP()[2];
    const double j21 = ev.J / lt;
    const double j22 = -g.d2G;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det))
      throw NoConvergence("solve_equibiaxial_step: singular Jacobian");
    double dlt = -(r1 * j22 - j12 * r2) / det;
    double dP = -(j11 * r2 - r1 * j21) / det;
    if (lt + dlt <= 0.1 * lt) dlt = -0.9 * lt;
    lt += dlt;
    P += dP;
  }
  throw NoConvergence("solve_equibiaxial_step: no convergence");
}

namespace {

struct StepOutcome {
  MaterialState state;
  StepResult result;
};

// advance one outer step, sub-dividing locally on NoConvergence
StepOutcome advance(const ViscoModel& model, const MaterialState& state_n,
                    const LoadingProgram& prog, double t_next, double control, double lat_guess,
                    double P_guess, int depth) {
  const double dt = t_next - state_n.t;
  try {
    StepOutcome out;
    StepResult& r = out.result;
    r.t = t_next;
    switch (prog.kind) {
      case ProgramKind::UniaxialStretch:
      case ProgramKind::RelaxationHold: {
        const UniaxialStep u = solve_uniaxial_step(model, control, state_n, dt, lat_guess, P_guess);
        r.lambda = control;
        r.F = {control, 0, 0, 0, u.lambda_lat, 0, 0, 0, u.lambda_lat};
        r.P = u.P;
        r.nominal11 = u.nominal_axial;
        r.C = c_from_F(r.F);
        r.cauchy = cauchy_from(r.F, u.eval.stress(u.P), u.eval.J);
        r.branch_T_norms = u.eval.branch_T_norms;
        r.phi = u.eval.phi;
        out.state = u.eval.state;
        break;
      }
      case ProgramKind::SimpleShear: {
        const ShearStep s = solve_shear_step(model, control, state_n, dt);
        r.lambda = 1.0;
        r.gamma = control;
        r.F = {1.0, control, 0, 0, 1.0, 0, 0, 0, 1.0};
        r.P = s.P;
        r.C = c_from_F(r.F);
        const SymTensor2 S = s.eval.stress(s.P);
        r.cauchy = cauchy_from(r.F, S, s.eval.J);
        r.nominal11 = S[0];  // (F S)_11 with F_11 = 1, F_12 S_21 term included below
        r.nominal11 = S[0] + control * S[3];
        r.branch_T_norms = s.eval.branch_T_norms;
        r.phi = s.eval.phi;
        out.state = s.eval.state;
        break;
      }
      case ProgramKind::EquibiaxialStretch: {
        const EquibiaxialStep e =
            solve_equibiaxial_step(model, control, state_n, dt, lat_guess, P_guess);
        r.lambda = control;
        r.F = {control, 0, 0, 0, control, 0, 0, 0, e.lambda_thickness};
        r.P = e.P;
        r.nominal11 = e.nominal_inplane;
        r.C = c_from_F(r.F);
        r.cauchy = cauchy_from(r.F, e.eval.stress(e.P), e.eval.J);
        r.branch_T_norms = e.eval.branch_T_norms;
        r.phi = e.eval.phi;
        out.state = e.eval.state;
        break;
      }
      case ProgramKind::Custom: {
        // interpolate the deformation-gradient table at t_next
        std::array<double, 9> F{};
        const auto& sch = prog.schedule;
        if (prog.F_table.size() != sch.size())
          throw ConfigError("custom program: F table and schedule sizes differ");
        std::size_t hi = sch.size() - 1;
        for (std::size_t i = 1; i < sch.size(); ++i)
          if (t_next <= sch[i].t) {
            hi = i;
            break;
          }
        const std::size_t lo = hi > 0 ? hi - 1 : 0;
        const double tw = (sch[hi].t > sch[lo].t) ? (t_next - sch[lo].t) / (sch[hi].t - sch[lo].t) : 1.0;
        for (int k = 0; k < 9; ++k)
          F[static_cast<std::size_t>(k)] =
              prog.F_table[lo][static_cast<std::size_t>(k)] +
              tw * (prog.F_table[hi][static_cast<std::size_t>(k)] - prog.F_table[lo][static_cast<std::size_t>(k)]);
        const SymTensor2 C = c_from_F(F);
        const MaterialEval ev = evaluate_material(model, state_n, C, dt, /*need_tangent=*/false);
        double P = 0.0;
        if (model.vol.compressible()) {
          // invert dG(P) = J by Newton (dG is monotone for the shipped families)
          for (int it = 0; it < 80; ++it) {
            const GVolEval g = g_vol(model.vol, P);
            const double f = g.dG - ev.J;
            if (std::abs(f) <= 1e-13) break;
            P -= f / g.d2G;
          }
        } else if (std::abs(ev.J - 1.0) > 1e-8) {
          throw DomainError("custom program: incompressible model requires det F = 1");
        }
        r.lambda = 1.0;
        r.F = F;
        r.P = P;
        r.C = C;
        const SymTensor2 S = ev.stress(P);
        r.cauchy = cauchy_from(F, S, ev.J);
        r.nominal11 = F[0] * S[0] + F[1] * S(1, 0) + F[2] * S(2, 0);
        r.branch_T_norms = ev.branch_T_norms;
        r.phi = ev.phi;
        out.state = ev.state;
        break;
      }
    }
    return out;
  } catch (const NoConvergence&) {
    if (depth >= 6) throw;
    // halve the step: advance to the midpoint first, then retry
    const double t_mid = 0.5 * (state_n.t + t_next);
    const double c_mid = (prog.kind == ProgramKind::Custom)
                             ? 0.0
                             : schedule_value(prog.schedule, t_mid);
    StepOutcome first =
        advance(model, state_n, prog, t_mid, c_mid, lat_guess, P_guess, depth + 1);
    const double lg = (prog.kind == ProgramKind::UniaxialStretch ||
                       prog.kind == ProgramKind::RelaxationHold)
                          ? first.result.F[4]
                          : lat_guess;
    StepOutcome second =
        advance(model, first.state, prog, t_next, control, lg, first.result.P, depth + 1);
    // dissipation of the outer interval: average the sub-interval powers
    second.result.phi = 0.5 * (first.result.phi + second.result.phi);
    return second;
  }
}

}  // namespace

std::vector<StepResult> run_program(const ViscoModel& model, const LoadingProgram& prog) {
  if (prog.schedule.empty()) throw ConfigError("run_program: empty schedule");
  if (!(prog.dt > 0.0)) throw ConfigError("run_program: dt must be positive");
  const double t_end = prog.t_end > 0.0 ? prog.t_end : prog.schedule.back().t;

  SymTensor2 C0 = SymTensor2::identity();
  if (prog.kind == ProgramKind::Custom) {
    if (prog.F_table.empty()) throw ConfigError("run_program: custom program without F table");
    C0 = c_from_F(prog.F_table.front());
  } else {
    const double c0 = schedule_value(prog.schedule, 0.0);
    if (prog.kind == ProgramKind::UniaxialStretch || prog.kind == ProgramKind::RelaxationHold ||
        prog.kind == ProgramKind::EquibiaxialStretch) {
      if (std::abs(c0 - 1.0) > 1e-12)
        throw ConfigError("run_program: stretch programs must start at lambda = 1");
    }
  }
  MaterialState state = init_state(model, C0);

  std::vector<StepResult> results;
  const auto nsteps = static_cast<std::size_t>(std::llround(t_end / prog.dt));
  results.reserve(nsteps);

  double D = 0.0;
  double lat_guess = 0.0, P_guess = 0.0;
  for (std::size_t n = 1; n <= nsteps; ++n) {
    const double t_next = static_cast<double>(n) * prog.dt;
    const double control =
        (prog.kind == ProgramKind::Custom) ? 0.0 : schedule_value(prog.schedule, t_next);
    StepOutcome o;
    try {
      o = advance(model, state, prog, t_next, control, lat_guess, P_guess, 0);
    } catch (const Error& e) {
      throw NoConvergence("run_program failed at t = " + std::to_string(t_next) + ": " + e.what());
    }
    D += o.result.phi * prog.V_ref * prog.dt;
    o.result.D = D;
    state = o.state;
    lat_guess = o.result.F[4];
    P_guess = o.result.P;
    results.push_back(std::move(o.result));
  }
  return results;
}

std::vector<double> dissipation_accumulate(const std::vector<StepResult>& results, double V_ref,
                                           double dt) {
  std::vector<double> D;
  D.reserve(results.size());
  double acc = 0.0;
  for (const auto& r : results) {
    acc += r.phi * V_ref * dt;
    D.push_back(acc);
  }
  return D;
}

}  // namespace viscokit
