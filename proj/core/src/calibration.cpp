#include "viscokit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "viscokit/errors.hpp"

namespace viscokit {

double Dataset::loading_rate() const {
  if (rate > 0.0) return rate;
  if (time.size() < 2) throw DataError("Dataset: cannot derive a stretch rate from one point");
  // slope of the first loading segment
  for (std::size_t i = 1; i < time.size(); ++i) {
    const double dtime = time[i] - time[0];
    if (dtime > 0.0 && stretch[i] > stretch[0])
      return (stretch[i] - stretch[0]) / dtime;
  }
  throw DataError("Dataset: no loading segment found");
}

double Dataset::peak_stretch() const {
  if (peak > 0.0) return peak;
  return *std::max_element(stretch.begin(), stretch.end());
}

double nmad(const std::vector<std::vector<double>>& experimental,
            const std::vector<std::vector<double>>& predicted) {
  if (experimental.size() != predicted.size())
    throw LengthMismatch("nmad: number of data sets differs");
  if (experimental.empty()) throw EmptySet("nmad: no data sets");
  double acc = 0.0;
  for (std::size_t j = 0; j < experimental.size(); ++j) {
    const auto& e = experimental[j];
    const auto& p = predicted[j];
    if (e.size() != p.size()) throw LengthMismatch("nmad: set sizes differ");
    if (e.empty()) throw EmptySet("nmad: empty data set");
    double me = 0.0, mp = 0.0, md = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      me += std::abs(e[i]);
      mp += std::abs(p[i]);
      md += std::abs(e[i] - p[i]);
    }
    const double n = static_cast<double>(e.size());
    me /= n;
    mp /= n;
    md /= n;
    const double den = std::max(me, mp);
    if (den == 0.0) continue;  // identical all-zero sets contribute no error
    acc += md / den;
  }
  return 100.0 * acc / static_cast<double>(experimental.size());
}

std::vector<double> simulate_protocol(const ViscoModel& model, const Dataset& data, double dt_sim) {
  const double rate = data.loading_rate();
  const double peak = data.peak_stretch();
  if (!(rate > 0.0) || !(peak > 1.0)) throw DataError("simulate_protocol: invalid rate or peak");

  const double t_peak = (peak - 1.0) / rate;
  const double t_max = 2.0 * t_peak + dt_sim;

  MaterialState state = init_state(model, SymTensor2::identity());
  std::vector<double> ts{0.0}, stress{0.0};
  double lat_guess = 1.0, P_guess = 0.0, t = 0.0;
  while (t < t_max) {
    const double t_next = t + dt_sim;
    const double lam =
        (t_next <= t_peak) ? 1.0 + rate * t_next : std::max(peak - rate * (t_next - t_peak), 1e-3);
    const UniaxialStep u = solve_uniaxial_step(model, lam, state, dt_sim, lat_guess, P_guess);
    state = u.eval.state;
    lat_guess = u.lambda_lat;
    P_guess = u.P;
    ts.push_back(t_next);
    stress.push_back(u.nominal_axial);
    t = t_next;
    // unloading terminates at zero stress
    if (t_next > t_peak && u.nominal_axial <= 0.0) break;
  }

  // sample the simulated stress at the dataset time points
  std::vector<double> out;
  out.reserve(data.time.size());
  for (const double tq : data.time) {
    if (tq <= ts.front()) {
      out.push_back(stress.front());
      continue;
    }
    if (tq >= ts.back()) {
      out.push_back(std::max(stress.back(), 0.0));
      continue;
    }
    const auto it = std::upper_bound(ts.begin(), ts.end(), tq);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const double w = (tq - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
    out.push_back(stress[hi - 1] + w * (stress[hi] - stress[hi - 1]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// parameter addressing

namespace {

struct PathRef {
  std::string head;   // "equilibrium", "flv", "micro", "vol"
  int index = -1;     // branch/term index when present
  std::string field;  // "mu", "tau", "N", "eta", "m", "n", "kappa"
};

PathRef parse_path(const std::string& path) {
  PathRef r;
  const auto dot = path.find('.');
  if (dot == std::string::npos) throw ConfigError("parameter path '" + path + "': missing field");
  std::string head = path.substr(0, dot);
  r.field = path.substr(dot + 1);
  const auto lb = head.find('[');
  if (lb != std::string::npos) {
    const auto rb = head.find(']');
    if (rb == std::string::npos || rb < lb) throw ConfigError("parameter path '" + path + "': bad index");
    r.index = std::stoi(head.substr(lb + 1, rb - lb - 1));
    head = head.substr(0, lb);
  }
  r.head = head;
  return r;
}

ScaleFunction with_params(const ScaleFunction& sf, double m, double n) {
  switch (sf.family()) {
    case StrainFamily::SethHill:
      return ScaleFunction::seth_hill(m);
    case StrainFamily::Hencky:
      return ScaleFunction::hencky();
    case StrainFamily::CurnierRakotomanana:
      return ScaleFunction::curnier_rakotomanana(m, n);
    case StrainFamily::CurnierZysset:
      return ScaleFunction::curnier_zysset(m);
    case StrainFamily::DarijaniNaghdabadi:
      return ScaleFunction::darijani_naghdabadi(m, n);
  }
  throw ConfigError("with_params: unknown strain family");
}

template <typename Branch>
void set_strain_param(Branch& b, const std::string& field, double v) {
  if (field == "m")
    b.sf = with_params(b.sf, v, b.sf.n());
  else if (field == "n")
    b.sf = with_params(b.sf, b.sf.m(), v);
  else
    throw ConfigError("unknown strain parameter '" + field + "'");
}

}  // namespace

void set_model_parameter(ViscoModel& model, const std::string& path, double value) {
  const PathRef r = parse_path(path);
  const auto need_index = [&](std::size_t size) {
    if (r.index < 0 || static_cast<std::size_t>(r.index) >= size)
      throw ConfigError("parameter path '" + path + "': index out of range");
  };
  if (r.head == "equilibrium") {
    if (auto* chain = std::get_if<EightChainSpec>(&model.equilibrium)) {
      if (r.field == "mu")
        *chain = make_eight_chain_spec(value, chain->Nchain);
      else if (r.field == "N")
        *chain = make_eight_chain_spec(chain->mu, value);
      else
        throw ConfigError("unknown eight-chain parameter '" + r.field + "'");
      return;
    }
    auto& hill = std::get<HillClassSpec>(model.equilibrium);
    need_index(hill.terms.size());
    auto& term = hill.terms[static_cast<std::size_t>(r.index)];
    if (r.field == "mu") {
      if (!(value > 0.0)) throw DomainError("hill term: mu must be positive");
      term.mu = value;
    } else {
      set_strain_param(term, r.field, value);
    }
    return;
  }
  if (r.head == "flv") {
    need_index(model.flv.size());
    auto& b = model.flv[static_cast<std::size_t>(r.index)];
    if (r.field == "mu")
      b = make_flv_branch(value, b.tau, b.sf);
    else if (r.field == "tau")
      b = make_flv_branch(b.mu, value, b.sf);
    else if (r.field == "eta")
      b = make_flv_branch(b.mu, value / b.mu, b.sf);
    else
      set_strain_param(b, r.field, value);
    return;
  }
  if (r.head == "micro") {
    need_index(model.micro.size());
    auto& b = model.micro[static_cast<std::size_t>(r.index)];
    if (r.field == "mu")
      b = make_micro_branch(value, b.Nchain, b.eta, b.sf, b.scheme);
    else if (r.field == "N")
      b = make_micro_branch(b.mu, value, b.eta, b.sf, b.scheme);
    else if (r.field == "eta")
      b = make_micro_branch(b.mu, b.Nchain, value, b.sf, b.scheme);
    else
      set_strain_param(b, r.field, value);
    return;
  }
  if (r.head == "vol") {
    if (r.field == "kappa") {
      if (!(value > 0.0)) throw DomainError("vol.kappa must be positive");
      model.vol.kappa = value;
      return;
    }
    throw ConfigError("unknown volumetric parameter '" + r.field + "'");
  }
  throw ConfigError("unknown parameter path '" + path + "'");
}

double get_model_parameter(const ViscoModel& model, const std::string& path) {
  const PathRef r = parse_path(path);
  const auto pick_sf = [&](const ScaleFunction& sf) {
    if (r.field == "m") return sf.m();
    if (r.field == "n") return sf.n();
    throw ConfigError("unknown strain parameter '" + r.field + "'");
  };
  if (r.head == "equilibrium") {
    if (const auto* chain = std::get_if<EightChainSpec>(&model.equilibrium)) {
      if (r.field == "mu") return chain->mu;
      if (r.field == "N") return chain->Nchain;
      throw ConfigError("unknown eight-chain parameter '" + r.field + "'");
    }
    const auto& hill = std::get<HillClassSpec>(model.equilibrium);
    const auto& term = hill.terms.at(static_cast<std::size_t>(r.index));
    if (r.field == "mu") return term.mu;
    return pick_sf(term.sf);
  }
  if (r.head == "flv") {
    const auto& b = model.flv.at(static_cast<std::size_t>(r.index));
    if (r.field == "mu") return b.mu;
    if (r.field == "tau") return b.tau;
    if (r.field == "eta") return b.mu * b.tau;
    return pick_sf(b.sf);
  }
  if (r.head == "micro") {
    const auto& b = model.micro.at(static_cast<std::size_t>(r.index));
    if (r.field == "mu") return b.mu;
    if (r.field == "N") return b.Nchain;
    if (r.field == "eta") return b.eta;
    return pick_sf(b.sf);
  }
  if (r.head == "vol" && r.field == "kappa") return model.vol.kappa;
  throw ConfigError("unknown parameter path '" + path + "'");
}

// ---------------------------------------------------------------------------
// Nelder-Mead with bound projection in transformed space

namespace {

double to_internal(double x, const FreeParam& p) {
  return p.transform == ParamTransform::Log ? std::log(x) : x;
}
double from_internal(double z, const FreeParam& p) {
  return p.transform == ParamTransform::Log ? std::exp(z) : z;
}

struct Objective {
  const FitSpec& spec;
  const std::vector<Dataset>& datasets;
  const std::vector<std::vector<double>>& exp_sets;

  mutable long evals = 0;
  mutable long failures = 0;
  mutable std::vector<double> trace;
  mutable double best = std::numeric_limits<double>::infinity();

  double operator()(const std::vector<double>& z) const {
    ++evals;
    double value = std::numeric_limits<double>::infinity();
    try {
      ViscoModel m = spec.model;
      for (std::size_t i = 0; i < spec.params.size(); ++i)
        set_model_parameter(m, spec.params[i].path, from_internal(z[i], spec.params[i]));
      std::vector<std::vector<double>> pred;
      pred.reserve(datasets.size());
      for (const auto& d : datasets) pred.push_back(simulate_protocol(m, d, spec.dt_sim));
      value = nmad(exp_sets, pred);
    } catch (const Error&) {
      ++failures;
    }
    best = std::min(best, value);
    trace.push_back(best);
    return value;
  }
};

struct NmOutcome {
  std::vector<double> z;
  double f = std::numeric_limits<double>::infinity();
  long evals = 0;
  long failures = 0;
  std::vector<double> trace;
};

NmOutcome nelder_mead(const FitSpec& spec, const std::vector<Dataset>& datasets,
                      const std::vector<std::vector<double>>& exp_sets,
                      const std::vector<double>& z0) {
  const std::size_t n = spec.params.size();
  Objective obj{spec, datasets, exp_sets};

  const auto clamp = [&](std::vector<double>& z) {
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = to_internal(spec.params[i].lo, spec.params[i]);
      const double hi = to_internal(spec.params[i].hi, spec.params[i]);
      z[i] = std::clamp(z[i], lo, hi);
    }
  };

  std::vector<std::vector<double>> x(n + 1, z0);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = to_internal(spec.params[i].lo, spec.params[i]);
    const double hi = to_internal(spec.params[i].hi, spec.params[i]);
    x[i + 1][i] += spec.simplex_scale * (hi - lo) * 0.25;
    clamp(x[i + 1]);
    if (x[i + 1][i] == x[0][i]) x[i + 1][i] -= spec.simplex_scale * (hi - lo) * 0.25;
  }
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) f[i] = obj(x[i]);

  const auto order = [&]() {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (f[a] != f[b]) return f[a] < f[b];
      return x[a] < x[b];  // deterministic tie-break
    });
    std::vector<std::vector<double>> xs(n + 1);
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs[i] = x[idx[i]];
      fs[i] = f[idx[i]];
    }
    x = std::move(xs);
    f = std::move(fs);
  };

  while (obj.evals < spec.max_evals) {
    order();
    if (std::isfinite(f[0]) && std::isfinite(f[n]) && f[n] - f[0] < 1e-10) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += x[i][k] / static_cast<double>(n);

    const auto blend = [&](double coef) {
      std::vector<double> z(n);
      for (std::size_t k = 0; k < n; ++k) z[k] = centroid[k] + coef * (x[n][k] - centroid[k]);
      clamp(z);
      return z;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = obj(xr);
    if (fr < f[0]) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = obj(xe);
      if (fe < fr) {
        x[n] = xe;
        f[n] = fe;
      } else {
        x[n] = xr;
        f[n] = fr;
      }
      continue;
    }
    if (fr < f[n - 1]) {
      x[n] = xr;
      f[n] = fr;
      continue;
    }
    const bool outside = fr < f[n];
    const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
    const double fc = obj(xc);
    if (fc < std::min(fr, f[n])) {
      x[n] = xc;
      f[n] = fc;
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) x[i][k] = x[0][k] + 0.5 * (x[i][k] - x[0][k]);
      clamp(x[i]);
      f[i] = obj(x[i]);
      if (obj.evals >= spec.max_evals) break;
    }
  }
  order();

  NmOutcome out;
  out.z = x[0];
  out.f = f[0];
  out.evals = obj.evals;
  out.failures = obj.failures;
  out.trace = std::move(obj.trace);
  return out;
}

}  // namespace

FitResult fit(const FitSpec& spec, const std::vector<Dataset>& datasets) {
  if (datasets.empty()) throw EmptySet("fit: at least one dataset required");
  for (const auto& p : spec.params) {
    if (!(p.lo < p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
      throw ConfigError("fit: bounds of '" + p.path + "' must be finite with lo < hi");
    if (p.transform == ParamTransform::Log && !(p.lo > 0.0))
      throw ConfigError("fit: log-transformed parameter '" + p.path + "' needs positive bounds");
  }

  std::vector<std::vector<double>> exp_sets;
  exp_sets.reserve(datasets.size());
  for (const auto& d : datasets) exp_sets.push_back(d.stress);

  const std::size_t n = spec.params.size();

  if (n == 0) {
    // identity fit: evaluate the template as-is
    std::vector<std::vector<double>> pred;
    for (const auto& d : datasets) pred.push_back(simulate_protocol(spec.model, d, spec.dt_sim));
    FitResult out;
    out.model = spec.model;
    out.nmad = nmad(exp_sets, pred);
    out.trace = {out.nmad};
    out.evaluations = 1;
    return out;
  }

  // Latin-hypercube start points in the transformed box, deterministic in the seed
  const int restarts = std::max(1, spec.restarts);
  std::vector<std::vector<double>> starts(static_cast<std::size_t>(restarts),
                                          std::vector<double>(n, 0.0));
  {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<int> perm(static_cast<std::size_t>(restarts));
      for (int i = 0; i < restarts; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < restarts; ++i) {
        const double u = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + uni(rng)) /
                         static_cast<double>(restarts);
        const double lo = to_internal(spec.params[k].lo, spec.params[k]);
        const double hi = to_internal(spec.params[k].hi, spec.params[k]);
        starts[static_cast<std::size_t>(i)][k] = lo + u * (hi - lo);
      }
    }
  }

  // restarts are independent; run them concurrently and aggregate
  // deterministically (ties broken by lexicographic parameter comparison)
  std::vector<std::future<NmOutcome>> futures;
  futures.reserve(starts.size());
  for (const auto& z0 : starts)
    futures.push_back(std::async(std::launch::async, [&spec, &datasets, &exp_sets, z0]() {
      return nelder_mead(spec, datasets, exp_sets, z0);
    }));

  NmOutcome best;
  std::vector<double> trace;
  long evals = 0;
  long failures = 0;
  bool any = false;
  for (auto& fu : futures) {
    NmOutcome o = fu.get();
    evals += o.evals;
    failures += o.failures;
    trace.insert(trace.end(), o.trace.begin(), o.trace.end());
    if (!any || o.f < best.f || (o.f == best.f && o.z < best.z)) {
      best = std::move(o);
      any = true;
    }
  }
  if (!std::isfinite(best.f)) throw AllEvaluationsFailed("fit: every objective evaluation failed");
  (void)failures;

  // re-run best-so-far envelope over the concatenated trace
  double run = std::numeric_limits<double>::infinity();
  for (auto& v : trace) {
    run = std::min(run, v);
    v = run;
  }

  FitResult out;
  out.params.reserve(n);
  out.model = spec.model;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = from_internal(best.z[i], spec.params[i]);
    out.params.push_back(v);
    set_model_parameter(out.model, spec.params[i].path, v);
  }
  out.nmad = best.f;
  out.trace = std::move(trace);
  out.evaluations = evals;
  return out;
}

double predict(const ViscoModel& model, const Dataset& data, double dt_sim) {
  return nmad({data.stress}, {simulate_protocol(model, data, dt_sim)});
}

}  // namespace viscokit
