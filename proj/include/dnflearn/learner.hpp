#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dnflearn/features.hpp"
#include "dnflearn/noise.hpp"
#include "dnflearn/profile.hpp"
#include "dnflearn/stem_finder.hpp"
#include "dnflearn/teacher.hpp"
#include "dnflearn/winnow.hpp"

namespace dnflearn {

// How the Winnow mistake cap is chosen at each restart.
//   explicit  cap
//   paper     (FCS / (n ceil(log2 n)))^(ceil(log2 k)^3) * ceil(log2 n), FCS = reps (n + 1)
//   linear    c0 * (n + N) * w_est, N = current feature count
//   quadlog   c * w_est^2 * ceil(log2 N)
struct CapPolicy {
  enum class Kind { kExplicit, kPaper, kLinear, kQuadLog };
  Kind kind = Kind::kQuadLog;
  std::uint64_t cap = 500;
  double c0 = 4.0;
  double c = 8.0;
  double w_est = 6.0;

  static CapPolicy explicit_cap(std::uint64_t cap) { return {Kind::kExplicit, cap}; }
  std::string name() const;
};
CapPolicy::Kind parse_cap_kind(const std::string& s);

// Result saturates at kCapCeiling.
inline constexpr std::uint64_t kCapCeiling = std::uint64_t{1} << 50;
std::uint64_t mmax(const CapPolicy& policy, std::uint64_t fcs_bound, int n, int k, std::uint64_t feature_count);

struct LearnerConfig {
  ScaleProfile profile = ScaleProfile::desk(1);
  StemFinderConfig stem{0, 1};  // reps 0 means StemFinderConfig::default_reps
  NoiseOracle noise = NoiseOracle::exact_ie();
  FrvOptions frv;
  CapPolicy cap;
  double kappa = 0.01;
  double alpha = 2.0;
  int max_dense_r = 20;
  std::uint64_t seed = 1;

  // Guardrails; 0 disables a limit. max_restarts 0 means the derived bound
  // k * r_max * |catalog| + k + 1.
  std::uint64_t max_restarts = 0;
  int max_magic_moments = 0;  // 0 means 2k + 2
  std::uint64_t max_eqs = 50'000'000;
  int max_pairs = 20'000;
  double max_seconds = 0.0;

  bool audit = false;
};

// Per-call failure budget of the sampled noise estimates: kappa / expected_calls.
double kappa_schedule(double kappa, std::uint64_t expected_calls);

enum class RunStatus { kLearned, kIncomplete };
const char* run_status_name(RunStatus s);

struct MagicMomentRecord {
  int restart = 0;
  std::uint64_t positives = 0;  // |POS| searched
  int new_pairs = 0;
  // Audit mode: terms of the target that gained their first valid stem.
  std::vector<int> newly_witnessed;
};

struct RunReport {
  RunStatus status = RunStatus::kIncomplete;
  std::string reason;

  QueryLog queries;
  std::uint64_t winnow_runs = 0;
  std::uint64_t mistakes = 0;  // Winnow counterexamples over all runs
  int magic_moments = 0;
  std::uint64_t relevant_updates = 0;
  std::uint64_t skipped_pairs = 0;  // negative-counterexample pairs with no y in ALLPOS
  std::uint64_t frv_calls = 0;
  std::uint64_t allpos = 0;

  int stem_reps = 0;
  std::uint64_t last_cap = 0;
  int catalog_pairs = 0;
  std::uint64_t feature_count = 0;
  int max_r = 0;
  double per_call_kappa = 0.0;      // smallest used; 0 for exact noise oracles
  std::uint64_t noise_samples = 0;  // largest per-evaluation sample count used

  std::vector<MagicMomentRecord> magic;
  std::vector<std::string> warnings;
  std::vector<std::string> violations;  // audit mode
  bool rechecked = false;               // audit mode ran the exhaustive recheck
  bool recheck_ok = false;

  double wall_seconds = 0.0;

  // Final hypothesis; null means the constant-false function.
  std::shared_ptr<const CatalogWinnow> winnow;
  FeatureCatalog catalog{0};

  bool learned() const { return status == RunStatus::kLearned; }
  bool predict(const Assignment& x) const { return winnow && winnow->predict(x); }
  std::string to_json(bool include_wall_time = false) const;
};

// Evaluates a finished run's hypothesis.
class LearnedHypothesis : public Hypothesis {
 public:
  explicit LearnedHypothesis(std::shared_ptr<const CatalogWinnow> w) : w_(std::move(w)) {}
  bool evaluate(const Assignment& x) const override { return w_ && w_->predict(x); }
  bool evaluate_lex(int, std::uint64_t index) const override { return w_ && w_->predict_lex(index); }
  std::string id() const override { return w_ ? "winnow-final" : "const0"; }

 private:
  std::shared_ptr<const CatalogWinnow> w_;
};

// Winnow over a growing catalog of eligible pairs, with relevant-variable growth on
// negative counterexamples and candidate-stem search when a run exceeds its cap.
// Audit mode additionally reads the hidden target to check the run's invariants.
RunReport learn_dnf(Teacher& teacher, const LearnerConfig& cfg);

}  // namespace dnflearn
