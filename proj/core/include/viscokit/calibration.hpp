// NMAD metric, uniaxial protocol simulation against stretch-stress records,
// and simultaneous parameter fitting by multi-start Nelder-Mead with bound
// projection in transformed (log / affine) parameter space.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "viscokit/driver.hpp"
#include "viscokit/model.hpp"

namespace viscokit {

struct Dataset {
  std::string label;
  std::vector<double> time;     // s, monotone
  std::vector<double> stretch;  // -
  std::vector<double> stress;   // nominal, kPa
  double rate = 0.0;            // loading stretch rate (1/s); derived from the data when 0
  double peak = 0.0;            // maximum stretch; derived from the data when 0

  double loading_rate() const;
  double peak_stretch() const;
};

// normalized mean absolute difference over M data sets, in percent
double nmad(const std::vector<std::vector<double>>& experimental,
            const std::vector<std::vector<double>>& predicted);

// Runs the uniaxial loading-unloading protocol of a dataset (ramp at the
// dataset rate to its peak stretch, unload at the same rate, terminate at
// zero stress) and samples the nominal stress at the dataset time points.
std::vector<double> simulate_protocol(const ViscoModel& model, const Dataset& data, double dt_sim);

enum class ParamTransform { Log, Affine };

struct FreeParam {
  std::string path;  // e.g. "micro[0].mu", "equilibrium.N", "flv[0].m"
  double lo, hi;
  ParamTransform transform = ParamTransform::Log;
};

struct FitSpec {
  ViscoModel model;  // template; free parameters overwrite fields by path
  std::vector<FreeParam> params;
  int restarts = 8;
  int max_evals = 400;  // per restart
  double simplex_scale = 0.35;
  std::uint64_t seed = 0;
  double dt_sim = 0.05;  // s
};

struct FitResult {
  std::vector<double> params;
  ViscoModel model;
  double nmad = 0.0;
  std::vector<double> trace;  // best-so-far NMAD per objective evaluation
  long evaluations = 0;
};

// set a model field addressed by a parameter path; ConfigError on unknown paths
void set_model_parameter(ViscoModel& model, const std::string& path, double value);
double get_model_parameter(const ViscoModel& model, const std::string& path);

FitResult fit(const FitSpec& spec, const std::vector<Dataset>& datasets);

// NMAD of a model prediction on one held-out dataset
double predict(const ViscoModel& model, const Dataset& data, double dt_sim);

}  // namespace viscokit
