#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dnflearn/formula.hpp"
#include "dnflearn/random.hpp"

namespace dnflearn {

enum class Phase { kOther = 0, kStem, kNoise, kWinnow, kBaseline };
inline constexpr int kNumPhases = 5;
const char* phase_name(Phase p);

struct QueryLog {
  std::uint64_t mq_count = 0;
  std::uint64_t eq_count = 0;
  std::array<std::uint64_t, kNumPhases> mq_by_phase{};
  std::array<std::uint64_t, kNumPhases> eq_by_phase{};
  // Noised-value evaluations served by an exact (white-box) noise oracle. Sampled
  // evaluations are paid for in MQs instead and counted in mq_by_phase[kNoise].
  std::uint64_t exact_noise_evals = 0;

  std::uint64_t mq(Phase p) const { return mq_by_phase[static_cast<int>(p)]; }
  std::uint64_t eq(Phase p) const { return eq_by_phase[static_cast<int>(p)]; }
  std::string to_json() const;
};

enum class CexPolicyKind { kLexMin, kUniformRandom, kPositiveFirstLex };

struct CexPolicy {
  CexPolicyKind kind = CexPolicyKind::kLexMin;
  std::uint64_t seed = 0;

  static CexPolicy lex_min() { return {}; }
  static CexPolicy uniform_random(std::uint64_t seed) { return {CexPolicyKind::kUniformRandom, seed}; }
  static CexPolicy positive_first_lex() { return {CexPolicyKind::kPositiveFirstLex, 0}; }
  std::string name() const;
};

// Anything the teacher can test for equivalence.
class Hypothesis {
 public:
  virtual ~Hypothesis() = default;
  virtual bool evaluate(const Assignment& x) const = 0;
  // Value at the point with the given lexicographic index. Override when a faster
  // route exists; equivalence scans call this 2^n times.
  virtual bool evaluate_lex(int n, std::uint64_t index) const {
    return evaluate(Assignment::from_lex_index(n, index));
  }
  // Short label for transcripts.
  virtual std::string id() const { return "h"; }
};

class PredicateHypothesis : public Hypothesis {
 public:
  PredicateHypothesis(std::function<bool(const Assignment&)> fn, std::string label = "predicate")
      : fn_(std::move(fn)), label_(std::move(label)) {}
  bool evaluate(const Assignment& x) const override { return fn_(x); }
  std::string id() const override { return label_; }

 private:
  std::function<bool(const Assignment&)> fn_;
  std::string label_;
};

class ConstantHypothesis : public Hypothesis {
 public:
  explicit ConstantHypothesis(bool value) : value_(value) {}
  bool evaluate(const Assignment&) const override { return value_; }
  bool evaluate_lex(int, std::uint64_t) const override { return value_; }
  std::string id() const override { return value_ ? "const1" : "const0"; }

 private:
  bool value_;
};

struct EqResult {
  bool correct = false;
  Assignment counterexample;  // meaningful only when !correct
  bool label = false;         // target value at the counterexample
};

class Teacher {
 public:
  static constexpr int kDefaultNCap = 26;

  explicit Teacher(Dnf target, CexPolicy policy = CexPolicy::lex_min(), int n_cap = kDefaultNCap);

  int n() const { return target_.n(); }

  bool mq(const Assignment& x);
  // Exhaustive in exact mode. With approximate mode enabled (n > n_cap allowed), tests
  // only `approx_samples` uniform points and may wrongly answer Correct.
  EqResult eq(const Hypothesis& h);

  void enable_approximate_eq(std::uint64_t samples, std::uint64_t seed);

  const QueryLog& stats() const { return log_; }
  Phase phase() const { return phase_; }
  Phase set_phase(Phase p) {
    Phase old = phase_;
    phase_ = p;
    return old;
  }

  // Query transcript as JSON lines; nullptr turns it off.
  void set_transcript(std::ostream* out) { transcript_ = out; }

  // White-box access for exact noise oracles and audits. Learner code reaches the
  // target only through mq/eq and the exact-noise hook below.
  const Dnf& white_box_target() const { return target_; }
  void count_exact_noise_eval() { ++log_.exact_noise_evals; }

  // Independent exhaustive disagreement count (ignores policy, not logged).
  std::uint64_t count_disagreements(const Hypothesis& h) const;

 private:
  const std::vector<std::uint64_t>& table();
  void write_record(const char* kind, const std::string& input, int answer);

  Dnf target_;
  CexPolicy policy_;
  int n_cap_;
  QueryLog log_;
  Phase phase_ = Phase::kOther;
  std::ostream* transcript_ = nullptr;
  std::vector<std::uint64_t> table_;
  bool table_ready_ = false;
  Rng policy_rng_;
  std::uint64_t approx_samples_ = 0;
  Rng approx_rng_{0};
};

// Restores the previous phase on scope exit.
class PhaseScope {
 public:
  PhaseScope(Teacher& t, Phase p) : teacher_(t), old_(t.set_phase(p)) {}
  ~PhaseScope() { teacher_.set_phase(old_); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  Teacher& teacher_;
  Phase old_;
};

// Exhaustive check of h against f over all 2^n points; independent of Teacher.
bool exhaustively_equal(const Dnf& f, const Hypothesis& h);

}  // namespace dnflearn
