// Self-check suites behind the `verify` command: Richardson-extrapolated
// finite-difference checks of every analytic derivative tensor, the
// Legendre-transform defects of the volumetric catalog, and the
// model-recovery oracles.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace viscokit {

struct CheckResult {
  std::string name;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass() const { return max_rel_err <= tolerance; }
};

struct VerifyOptions {
  std::uint64_t seed = 20240901;
  int states = 20;          // random states per check
  double fault_scale = 0.0; // test-only: perturbs analytic results by (1 + fault_scale)
};

std::vector<CheckResult> verify_tensor_checks(const VerifyOptions& opt);
std::vector<CheckResult> verify_strain_checks(const VerifyOptions& opt);
std::vector<CheckResult> verify_volumetric_checks(const VerifyOptions& opt);
std::vector<CheckResult> verify_flv_checks(const VerifyOptions& opt);
std::vector<CheckResult> verify_micro_checks(const VerifyOptions& opt);

// scope in {"all", "tensor", "strain", "volumetric", "flv", "micro"}
std::vector<CheckResult> run_verify(const std::string& scope, const VerifyOptions& opt);

}  // namespace viscokit
