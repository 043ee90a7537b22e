#pragma once

#include <cstdint>
#include <vector>

#include "dnflearn/formula.hpp"
#include "dnflearn/teacher.hpp"

namespace dnflearn {

// A disjunction of literals over x_1..x_n (n <= 64), as masks in lexicographic-index
// space (x_i at bit n - i).
struct Clause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool eval_lex(std::uint64_t index) const { return ((index & pos) | (~index & neg)) != 0; }
};

// Conjunction of the surviving clauses.
class KcnfHypothesis : public Hypothesis {
 public:
  KcnfHypothesis(int n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {}
  bool evaluate(const Assignment& x) const override { return evaluate_lex(n_, x.lex_index()); }
  bool evaluate_lex(int, std::uint64_t index) const override;
  std::string id() const override { return "kcnf/" + std::to_string(clauses_.size()); }

  const std::vector<Clause>& clauses() const { return clauses_; }
  void eliminate_violated(std::uint64_t index);

 private:
  int n_;
  std::vector<Clause> clauses_;
};

inline constexpr std::uint64_t kKcnfMaxClauses = 10'000'000;

// Number of non-tautological clauses of width 1..k over n variables.
std::uint64_t kcnf_clause_count(int n, int k);

struct KcnfResult {
  bool learned = false;
  std::uint64_t eq_count = 0;
  std::uint64_t initial_clauses = 0;
  KcnfHypothesis hypothesis{0, {}};
};

// Elimination learner: start from every clause of width <= k, delete those violated by
// each positive counterexample. Throws ConfigError when the clause count exceeds
// kKcnfMaxClauses and ContractViolation on a negative counterexample (the target is
// not a k-CNF).
KcnfResult learn_kcnf_baseline(Teacher& teacher, int k);

}  // namespace dnflearn
