#include "viscokit/verify.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "viscokit/calibration.hpp"
#include "viscokit/driver.hpp"
#include "viscokit/errors.hpp"
#include "viscokit/flv.hpp"
#include "viscokit/micromech.hpp"
#include "viscokit/model.hpp"
#include "viscokit/strain.hpp"
#include "viscokit/volumetric.hpp"

namespace viscokit {

namespace {

using Rng = std::mt19937_64;

SymTensor2 random_rotation_spd(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // random orthonormal frame by Gram-Schmidt on Gaussian vectors
  Vec3 a, b;
  for (int i = 0; i < 3; ++i) {
    a[i] = gauss(rng);
    b[i] = gauss(rng);
  }
  a = normalized(a);
  const double d = dot(b, a);
  for (int i = 0; i < 3; ++i) b[i] -= d * a[i];
  b = normalized(b);
  const Vec3 c = cross(a, b);
  SymTensor2 out;
  const std::array<Vec3, 3> n{a, b, c};
  for (const auto& dir : n) {
    const double y = lo * std::pow(hi / lo, uni(rng));
    out += y * sym_dyad(dir, dir);
  }
  return out;
}

SymTensor2 basis_tensor(int k) {
  SymTensor2 b;
  b[k] = 1.0;
  return b;
}

// Richardson-extrapolated central difference of a tensor-valued map along
// the k-th symmetric basis direction; returns dF[B_k] (the directional
// derivative with both symmetric slots of off-diagonal pairs perturbed)
template <typename F>
auto fd_dir(const F& f, const SymTensor2& C, int k, double h) {
  const SymTensor2 B = basis_tensor(k);
  const auto d1 = (f(C + h * B) - f(C - (h)*B)) * (1.0 / (2.0 * h));
  const auto d2 = (f(C + (0.5 * h) * B) - f(C - (0.5 * h) * B)) * (1.0 / h);
  return (1.0 / 3.0) * (4.0 * d2 - d1);
}

// FD of a SymTensor2-valued map as a rank-4 tensor scaled like 2 dF/dC
template <typename F>
Tensor4 fd_tangent2(const F& f, const SymTensor2& C, double h) {
  Tensor4 t;
  for (int k = 0; k < 6; ++k) {
    const SymTensor2 col = fd_dir(f, C, k, h);
    // dF[B_k] = (1/2) T : B_k, so the stored column is 2 dF[B_k]/w_k
    const double scale = 2.0 / kWeight[static_cast<std::size_t>(k)];
    for (int i = 0; i < 6; ++i) t(i, k) = scale * col[i];
  }
  return t;
}

// FD of a Tensor4-valued map as a rank-6 tensor scaled like 2 dF/dC
template <typename F>
Tensor6 fd_tangent4(const F& f, const SymTensor2& C, double h) {
  Tensor6 t;
  for (int k = 0; k < 6; ++k) {
    const Tensor4 col = fd_dir(f, C, k, h);
    const double scale = 2.0 / kWeight[static_cast<std::size_t>(k)];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) t(i, j, k) = scale * col(i, j);
  }
  return t;
}

double rel_err4(const Tensor4& got, const Tensor4& want) {
  double scale = std::max(want.max_abs(), 1e-12);
  return (got - want).max_abs() / scale;
}

double rel_err6(const Tensor6& got, const Tensor6& want) {
  double scale = std::max(want.max_abs(), 1e-12);
  double d = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) d = std::max(d, std::abs(got(i, j, k) - want(i, j, k)));
  return d / scale;
}

std::vector<std::pair<std::string, ScaleFunction>> shipped_families() {
  return {
      {"seth_hill(2)", ScaleFunction::seth_hill(2.0)},
      {"seth_hill(-2)", ScaleFunction::seth_hill(-2.0)},
      {"hencky", ScaleFunction::hencky()},
      {"curnier_rakotomanana(1,1)", ScaleFunction::curnier_rakotomanana(1.0, 1.0)},
      {"curnier_zysset(1)", ScaleFunction::curnier_zysset(1.0)},
      {"darijani_naghdabadi(1,1.5)", ScaleFunction::darijani_naghdabadi(1.0, 1.5)},
  };
}

std::vector<std::pair<std::string, ScaleFunction>> coercive_families() {
  return {
      {"hencky", ScaleFunction::hencky()},
      {"curnier_rakotomanana(1,1)", ScaleFunction::curnier_rakotomanana(1.0, 1.0)},
      {"curnier_rakotomanana(0.9,1.67)", ScaleFunction::curnier_rakotomanana(0.9, 1.67)},
      {"darijani_naghdabadi(1,1.5)", ScaleFunction::darijani_naghdabadi(1.0, 1.5)},
  };
}

}  // namespace

std::vector<CheckResult> verify_tensor_checks(const VerifyOptions& opt) {
  Rng rng(opt.seed);
  std::vector<CheckResult> out;

  double recon = 0.0, proj = 0.0;
  for (int s = 0; s < std::max(opt.states, 1) * 10; ++s) {
    const SymTensor2 A = random_rotation_spd(rng, 0.25, 4.0);
    const Spectral3 sp = spectral_decompose(A, true);
    recon = std::max(recon, (sp.reconstruct() - A).norm() / A.norm());
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double d = ddot(sp.projector(a), sp.projector(b)) - (a == b ? 1.0 : 0.0);
        proj = std::max(proj, std::abs(d));
      }
  }
  out.push_back({"spectral reconstruction", recon + opt.fault_scale, 1e-12});
  out.push_back({"projector orthonormality", proj + opt.fault_scale, 1e-12});
  return out;
}

std::vector<CheckResult> verify_strain_checks(const VerifyOptions& opt) {
  Rng rng(opt.seed + 1);
  std::vector<CheckResult> out;

  for (const auto& [name, sf] : shipped_families()) {
    double eq = 0.0, el = 0.0;
    for (int s = 0; s < opt.states; ++s) {
      const SymTensor2 C = random_rotation_spd(rng, 0.5, 3.0);
      const StrainKit kit = build_strain_kit(C, sf);
      const auto strain = [&](const SymTensor2& X) { return generalized_strain(X, sf); };
      const auto qmap = [&](const SymTensor2& X) { return build_strain_kit(X, sf).Q; };
      eq = std::max(eq, rel_err4((1.0 + opt.fault_scale) * kit.Q, fd_tangent2(strain, C, 1e-3)));
      el = std::max(el, rel_err6((1.0 + opt.fault_scale) * kit.L, fd_tangent4(qmap, C, 2e-3)));
    }
    out.push_back({"Q vs FD [" + name + "]", eq, 1e-6});
    out.push_back({"L vs FD [" + name + "]", el, 1e-5});
  }

  for (const auto& [name, sf] : coercive_families()) {
    double eqi = 0.0, ek = 0.0;
    for (int s = 0; s < opt.states; ++s) {
      SymTensor2 Ee = random_rotation_spd(rng, 0.5, 2.0) - SymTensor2::identity();
      const ElasticKit kit = build_elastic_kit(Ee, sf);
      const auto cmap = [&](const SymTensor2& X) { return build_elastic_kit(X, sf).Ce; };
      const auto qimap = [&](const SymTensor2& X) { return build_elastic_kit(X, sf).Qe_inv; };
      // Qe_inv = (1/2) dCe/dEe -> compare 4 Qe_inv against the 2 d/dE convention
      eqi = std::max(eqi, rel_err4((1.0 + opt.fault_scale) * (4.0 * kit.Qe_inv),
                                   fd_tangent2(cmap, Ee, 1e-3)));
      ek = std::max(ek, rel_err6((1.0 + opt.fault_scale) * (4.0 * kit.Ke),
                                 fd_tangent4(qimap, Ee, 2e-3)));
    }
    out.push_back({"Qe_inv vs FD [" + name + "]", eqi, 1e-6});
    out.push_back({"Ke vs FD [" + name + "]", ek, 1e-5});
  }
  return out;
}

std::vector<CheckResult> verify_volumetric_checks(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double kappa = 100.0;
  const std::vector<std::pair<std::string, VolumetricModel>> models = {
      {"quadratic", VolumetricModel::quadratic(kappa)},
      {"st91", VolumetricModel::st91(kappa)},
      {"m94", VolumetricModel::m94(kappa)},
      {"l94", VolumetricModel::l94(kappa)},
  };
  for (const auto& [name, m] : models) {
    const std::array<double, 5> P = {0.0, 0.25 * kappa, -0.25 * kappa, 0.5 * kappa, -0.5 * kappa};
    const double defect = legendre_check(m, P);
    out.push_back({"Legendre defect [" + name + "]", defect / kappa + opt.fault_scale, 1e-8});

    // beta consistency with (drho/dP)/rho by FD
    double berr = 0.0;
    for (const double p : P) {
      const double h = 1e-5 * kappa;
      const GVolEval g = g_vol(m, p);
      const double drho = (g_vol(m, p + h).rho - g_vol(m, p - h).rho) / (2.0 * h);
      berr = std::max(berr, std::abs(drho / g.rho - g.beta) * kappa);
    }
    out.push_back({"beta vs FD [" + name + "]", berr + opt.fault_scale, 1e-6});
  }
  return out;
}

std::vector<CheckResult> verify_flv_checks(const VerifyOptions& opt) {
  Rng rng(opt.seed + 2);
  std::vector<CheckResult> out;

  const HillClassSpec eq = make_hill_spec({{20.0, ScaleFunction::curnier_rakotomanana(1.0, 1.0)}});
  const std::vector<FLVBranch> branches = {
      make_flv_branch(18.0, 3.0, ScaleFunction::hencky()),
      make_flv_branch(7.0, 0.8, ScaleFunction::seth_hill(2.0)),
  };

  double worst = 0.0;
  for (int s = 0; s < opt.states; ++s) {
    const SymTensor2 C_n = random_rotation_spd(rng, 0.6, 2.0);
    const SymTensor2 C = random_rotation_spd(rng, 0.6, 2.0);
    const double dt = 0.05;
    const FLVState state_n = flv_init(branches, isochoric_split(C_n).Ctil);

    const auto smap = [&](const SymTensor2& X) {
      const FLVState st = flv_step(branches, state_n, isochoric_split(X).Ctil, dt);
      const FlvStress fs = flv_stress(branches, eq, st, X, 0.0);
      return fs.S_inf_ich + fs.S_neq_ich;
    };
    const FLVState st = flv_step(branches, state_n, isochoric_split(C).Ctil, dt);
    const Tensor4 C_alg = (1.0 + opt.fault_scale) * flv_tangent(branches, eq, st, C, dt);
    worst = std::max(worst, rel_err4(C_alg, fd_tangent2(smap, C, 1e-4)));
  }
  out.push_back({"FLV algorithmic tangent vs FD", worst, 1e-6});
  return out;
}

std::vector<CheckResult> verify_micro_checks(const VerifyOptions& opt) {
  Rng rng(opt.seed + 3);
  std::vector<CheckResult> out;

  const EightChainSpec eq = make_eight_chain_spec(17.48, 320.29);
  const MicroBranch b = make_micro_branch(27.73, 102.09, 1789.94, ScaleFunction::hencky());
  const double dt = 0.05;

  double kerr = 0.0, herr = 0.0, cerr = 0.0;
  for (int s = 0; s < opt.states; ++s) {
    const SymTensor2 C_n = random_rotation_spd(rng, 0.7, 1.8);
    const SymTensor2 C = random_rotation_spd(rng, 0.7, 1.8);
    MicroState state_n{SymTensor2{}, generalized_strain(C_n, b.sf)};
    // pre-evolve once so Ev_n is nontrivial
    {
      const MicroStepData warm = micro_step(b, state_n, C_n, dt);
      state_n.Ev = warm.solve.Ev;
      state_n.E_n = warm.total_kit.E;
    }

    const MicroStepData step = micro_step(b, state_n, C, dt, 1e-14, 1e-14);

    // K against the numerical Jacobian of the residual in Ev
    {
      const SymTensor2 Ev = step.solve.Ev;
      const auto rmap = [&](const SymTensor2& X) {
        return micro_residual(b, X, state_n.Ev, state_n.E_n, step.total_kit.E, dt).R;
      };
      const Tensor4 K = (1.0 + opt.fault_scale) * micro_K(b, step.solve.kits, dt);
      // fd_tangent2 returns 2 dR/dEv in the stored convention; K is dR/dEv
      kerr = std::max(kerr, rel_err4(2.0 * K, fd_tangent2(rmap, Ev, 1e-5)));
    }

    // H against FD of the converged internal variable in C
    {
      const auto evmap = [&](const SymTensor2& X) {
        return micro_step(b, state_n, X, dt, 1e-14, 1e-14).solve.Ev;
      };
      const Tensor4 K = micro_K(b, step.solve.kits, dt);
      const Tensor4 H = (1.0 + opt.fault_scale) * micro_H_solve(K, step.total_kit.Q);
      herr = std::max(herr, rel_err4(H, fd_tangent2(evmap, C, 1e-4)));
    }

    // algorithmic tangent against FD of the stepped stress
    {
      const auto smap = [&](const SymTensor2& X) {
        const MicroStepData st = micro_step(b, state_n, X, dt, 1e-14, 1e-14);
        return ddot(micro_branch_stress(b, st, false).Tneq, st.total_kit.Q) +
               eightchain_equilibrium(eq, X).S;
      };
      const MicroBranchStress br = micro_branch_stress(b, step, true);
      const Tensor4 Ca = (1.0 + opt.fault_scale) * (br.C_neq + eightchain_equilibrium(eq, C).C);
      cerr = std::max(cerr, rel_err4(Ca, fd_tangent2(smap, C, 1e-4)));
    }
  }
  out.push_back({"micro K vs FD", kerr, 1e-6});
  out.push_back({"micro H vs FD", herr, 1e-6});
  out.push_back({"micro algorithmic tangent vs FD", cerr, 1e-6});
  return out;
}

std::vector<CheckResult> run_verify(const std::string& scope, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const auto add = [&](std::vector<CheckResult> v) {
    out.insert(out.end(), v.begin(), v.end());
  };
  const bool all = scope == "all" || scope.empty();
  if (all || scope == "tensor") add(verify_tensor_checks(opt));
  if (all || scope == "strain") add(verify_strain_checks(opt));
  if (all || scope == "volumetric") add(verify_volumetric_checks(opt));
  if (all || scope == "flv") add(verify_flv_checks(opt));
  if (all || scope == "micro") add(verify_micro_checks(opt));
  if (out.empty()) throw ConfigError("run_verify: unknown scope '" + scope + "'");
  return out;
}

}  // namespace viscokit
