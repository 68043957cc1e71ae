// Homogeneous-deformation test programs: uniaxial stretch (with an optional
// relaxation hold), cyclic simple shear, and equibiaxial stretch, plus a
// custom F(t) table.  Lateral stretch and the pressure-like variable are
// sub-solved so that the free faces are traction free; dissipation is
// accumulated on the way.

#pragma once

#include <array>
#include <vector>

#include "viscokit/model.hpp"

namespace viscokit {

enum class ProgramKind { UniaxialStretch, SimpleShear, EquibiaxialStretch, RelaxationHold, Custom };

struct SchedulePoint {
  double t;
  double value;
};

struct LoadingProgram {
  ProgramKind kind = ProgramKind::UniaxialStretch;
  std::vector<SchedulePoint> schedule;  // control value vs time, piecewise linear
  // Custom programs carry a deformation-gradient table at the schedule times
  std::vector<std::array<double, 9>> F_table;
  double dt = 0.01;       // s
  double t_end = 0.0;     // s; defaults to the last schedule point
  double V_ref = 1e-3;    // reference volume (m^3) used to scale dissipation
};

double schedule_value(const std::vector<SchedulePoint>& schedule, double t);

struct StepResult {
  double t = 0.0;
  std::array<double, 9> F{};  // row-major deformation gradient
  SymTensor2 C;
  double lambda = 1.0;  // control stretch (1 for shear programs)
  double gamma = 0.0;   // shear control (0 otherwise)
  double P = 0.0;       // pressure-like variable (kPa)
  SymTensor2 cauchy;    // Cauchy stress (kPa)
  double nominal11 = 0.0;  // axial first Piola-Kirchhoff component (kPa)
  std::vector<double> branch_T_norms;
  double phi = 0.0;  // dissipation power density (kPa/s)
  double D = 0.0;    // cumulative dissipation, V_ref * integral of phi dt
};

std::vector<StepResult> run_program(const ViscoModel& model, const LoadingProgram& program);

// one quasi-static uniaxial step: solves the lateral stretch and P so the
// lateral faces are stress free (incompressible: lambda_lat = lambda^-1/2
// with P from the lateral Cauchy stress; compressible: 2-unknown Newton)
struct UniaxialStep {
  double lambda_lat = 1.0;
  double P = 0.0;
  double nominal_axial = 0.0;
  MaterialEval eval;
};
UniaxialStep solve_uniaxial_step(const ViscoModel& model, double lambda_ax,
                                 const MaterialState& state_n, double dt, double lat_guess,
                                 double P_guess);

struct ShearStep {
  double P = 0.0;
  double traction = 0.0;  // sigma_12
  MaterialEval eval;
};
ShearStep solve_shear_step(const ViscoModel& model, double gamma, const MaterialState& state_n,
                           double dt);

struct EquibiaxialStep {
  double lambda_thickness = 1.0;
  double P = 0.0;
  double nominal_inplane = 0.0;
  MaterialEval eval;
};
EquibiaxialStep solve_equibiaxial_step(const ViscoModel& model, double lambda_in,
                                       const MaterialState& state_n, double dt, double thick_guess,
                                       double P_guess);

// cumulative dissipation from per-step power densities (uniform dt segments)
std::vector<double> dissipation_accumulate(const std::vector<StepResult>& results, double V_ref,
                                           double dt);

}  // namespace viscokit
