#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnflearn/features.hpp"
#include "dnflearn/formula.hpp"
#include "dnflearn/teacher.hpp"

namespace dnflearn {

// Balanced Winnow keeps w+ = alpha^e and w- = alpha^-e per feature: promotion and
// demotion move both tracks in opposite directions, so one integer exponent holds
// the whole state and the weights can never underflow to zero. Scores are exact
// fixed-point integers (net weight times 2^kFracBits), so every evaluation route
// gives bit-identical predictions.
using Score = __int128;

class WeightScale {
 public:
  static constexpr int kFracBits = 40;
  static constexpr int kMaxExponent = 60;

  explicit WeightScale(double alpha = 2.0);

  double alpha() const { return alpha_; }
  // round((alpha^e - alpha^-e) * 2^kFracBits); e clamped to +-kMaxExponent.
  Score net(int e) const { return table_[static_cast<std::size_t>(clamp(e) + kMaxExponent)]; }
  Score fixed(double v) const;  // round(v * 2^kFracBits)
  static int clamp(int e) { return e < -kMaxExponent ? -kMaxExponent : (e > kMaxExponent ? kMaxExponent : e); }

 private:
  double alpha_;
  std::vector<Score> table_;
};

std::string score_string(Score s);

// Winnow over an explicit list of 0/1 features, examples given as active-index lists.
class WinnowCore {
 public:
  // theta <= 0 means "feature count".
  explicit WinnowCore(std::size_t num_features, double alpha = 2.0, double theta = 0.0);

  std::size_t size() const { return exps_.size(); }
  double theta() const { return theta_; }
  std::uint64_t mistakes() const { return mistakes_; }
  int exponent(std::size_t j) const { return exps_[j]; }
  double w_pos(std::size_t j) const;
  double w_neg(std::size_t j) const;

  Score score(std::span<const std::uint32_t> active) const;
  bool predict(std::span<const std::uint32_t> active) const { return score(active) >= theta_fixed_; }
  // Only mistakes update; throws ContractViolation otherwise.
  void update(std::span<const std::uint32_t> active, bool label);

 private:
  WeightScale scale_;
  double theta_;
  Score theta_fixed_;
  std::vector<int> exps_;
  std::uint64_t mistakes_ = 0;
};

struct SparseExample {
  std::vector<std::uint32_t> active;
  bool label = false;
};

struct SparseRunResult {
  bool learned = false;
  std::uint64_t mistakes = 0;
};

// Equivalence-query loop over explicit features: `eq` returns nullopt when the
// current hypothesis is correct, else a counterexample.
SparseRunResult winnow_run_sparse(WinnowCore& w,
                                  const std::function<std::optional<SparseExample>(const WinnowCore&)>& eq,
                                  std::uint64_t cap);

// Winnow over Features(catalog). Per pair, a dense exponent array over the subsets of
// R (indexed by a local bitmask) and a running superset-sum table of net weights make
// every prediction one lookup per pair whose stem holds.
class CatalogWinnow {
 public:
  // Throws ConfigError if some pair has |R| > max_dense_r.
  CatalogWinnow(const FeatureCatalog& catalog, int n, double alpha = 2.0, double theta = 0.0, int max_dense_r = 20);

  std::uint64_t snapshot_id() const { return snapshot_; }
  std::uint64_t feature_count() const { return feature_count_; }
  double theta() const { return theta_; }
  Score theta_fixed() const { return theta_fixed_; }
  int n() const { return n_; }
  std::uint64_t mistakes() const { return mistakes_; }
  int num_pairs() const { return static_cast<int>(pairs_.size()); }

  // Table route (the one equivalence scans use).
  Score score(const Assignment& x) const;
  bool predict(const Assignment& x) const { return score(x) >= theta_fixed_; }
  bool predict_lex(std::uint64_t index) const;
  // Direct route: sums net weights of the active features one by one.
  Score score_direct(const Assignment& x) const;

  void update(const Assignment& x, bool label);

  // Exponent of the feature (pair j, variables vars); vars must lie in R_j.
  int exponent(int pair, const VarSet& vars) const;
  int d_max() const { return d_max_; }

 private:
  struct PairState {
    Term stem;
    std::uint64_t stem_pos_lex = 0, stem_neg_lex = 0;
    std::vector<int> vars_desc;  // R in descending order: local bit t <-> vars_desc[t]
    std::uint64_t r_lex = 0;     // R in lexicographic-index space
    std::vector<std::int8_t> exps;
    std::vector<Score> table;    // superset sums of net weights over degree <= d_max subsets
  };
  std::uint32_t local_index(const PairState& p, const Assignment& x) const;

  int n_;
  int d_max_;
  WeightScale scale_;
  double theta_;
  Score theta_fixed_;
  std::uint64_t snapshot_;
  std::uint64_t feature_count_;
  std::uint64_t mistakes_ = 0;
  std::vector<PairState> pairs_;
};

// Read-only view handed to the teacher.
class CatalogWinnowHypothesis : public Hypothesis {
 public:
  explicit CatalogWinnowHypothesis(const CatalogWinnow& w) : w_(w) {}
  bool evaluate(const Assignment& x) const override { return w_.predict(x); }
  bool evaluate_lex(int, std::uint64_t index) const override { return w_.predict_lex(index); }
  std::string id() const override;

 private:
  const CatalogWinnow& w_;
};

// Same model evaluated only through the direct feature sum; used for independent
// rechecks.
class DirectWinnowHypothesis : public Hypothesis {
 public:
  explicit DirectWinnowHypothesis(const CatalogWinnow& w) : w_(w) {}
  bool evaluate(const Assignment& x) const override { return w_.score_direct(x) >= w_.theta_fixed(); }
  std::string id() const override { return "winnow-direct"; }

 private:
  const CatalogWinnow& w_;
};

enum class WinnowExitKind { kLearned, kCapExceeded, kAborted };
const char* winnow_exit_name(WinnowExitKind k);

struct WinnowExit {
  WinnowExitKind kind = WinnowExitKind::kCapExceeded;
  std::uint64_t mistakes = 0;
  std::vector<Assignment> pos;  // positive counterexamples of this run, in order
  std::string to_json(std::uint64_t cap, std::uint64_t snapshot, std::uint64_t features) const;
};

struct WinnowHooks {
  // Called on every positive counterexample before the update.
  std::function<void(const Assignment&)> on_positive;
  // Called on every negative counterexample before the update; returning true ends
  // the run with kAborted.
  std::function<bool(const Assignment&)> on_negative;
};

// Equivalence-query loop: Learned on Correct; CapExceeded once more than `cap`
// counterexamples have been consumed.
WinnowExit winnow_run(Teacher& teacher, CatalogWinnow& w, std::uint64_t cap, const WinnowHooks& hooks = {});

}  // namespace dnflearn
