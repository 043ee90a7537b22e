#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnflearn/chebyshev.hpp"

namespace dnflearn {

struct SuiteResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::vector<std::string> failures;  // first few failing anchors, e.g. "approximator k=5 m=3 S=7"

  bool pass() const { return failed == 0 && checked > 0; }
  void fail(const std::string& anchor);
  std::string to_json() const;
};

struct AuditConfig {
  std::uint64_t seed = 20240601;
  // Replaceable for mutation testing of the coefficient suite.
  std::function<IntPoly(int)> chebyshev_gen = chebyshev;

  int max_cheb_degree = 40;
  int approx_k_lo = 2, approx_k_hi = 8;
  int ptf_instances = 100;
  int noise_instances = 200;
  int claim_instances = 100;
  int walk_target = 1000;       // instrumented walks
  int stem_trials = 200;
};

// sum |a_i| <= 3^d and C_d(1) = 1 for d <= max_cheb_degree.
SuiteResult suite_chebyshev(const AuditConfig& cfg);
// q(2k) = 1 and |q(S)| <= 1/(2k) for S < 2k, all m in 0..2k, exact.
SuiteResult suite_conjunction_approx(const AuditConfig& cfg);
// Random formulas (n <= 16, k <= 4, mixed lengths) with fully expressive catalogs
// padded by decoy pairs: the built threshold function equals the formula everywhere
// and records the composed degree.
SuiteResult suite_aug_ptf(const AuditConfig& cfg);
// Inclusion-exclusion and enumeration noise oracles agree to 1e-12 (n <= 14, k <= 5).
SuiteResult suite_noise_oracles(const AuditConfig& cfg);
// Short-term, no-medium and irrelevant-flip bounds on random and constructed
// instances.
SuiteResult suite_noise_claims(const AuditConfig& cfg);
// Walk invariants over instrumented stem-search walks (n <= 20, k <= 5).
SuiteResult suite_walks(const AuditConfig& cfg);
// Stem search from points that satisfy only long terms yields a valid stem in >= 99%
// of trials and only stems satisfied by the point. `success_rate` receives the
// measured rate when non-null.
SuiteResult suite_stem_success(const AuditConfig& cfg, double* success_rate = nullptr);

std::vector<SuiteResult> run_audit_suite(const AuditConfig& cfg);

}  // namespace dnflearn
