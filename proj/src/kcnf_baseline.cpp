#include "dnflearn/kcnf_baseline.hpp"

#include <algorithm>

#include "dnflearn/errors.hpp"

namespace dnflearn {

bool KcnfHypothesis::evaluate_lex(int, std::uint64_t index) const {
  for (const Clause& c : clauses_)
    if (!c.eval_lex(index)) return false;
  return true;
}

void KcnfHypothesis::eliminate_violated(std::uint64_t index) {
  std::erase_if(clauses_, [&](const Clause& c) { return !c.eval_lex(index); });
}

std::uint64_t kcnf_clause_count(int n, int k) {
  // sum_w C(n, w) 2^w, saturating.
  long double total = 0;
  long double choose = 1;
  for (int w = 1; w <= std::min(n, k); ++w) {
    choose = choose * (n - w + 1) / w;
    total += choose * static_cast<long double>(std::uint64_t{1} << std::min(w, 62));
    if (total > 1e18L) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(total + 0.5L);
}

namespace {

void enumerate(int n, int k, int next, int width, Clause c, std::vector<Clause>& out) {
  if (width > 0) out.push_back(c);
  if (width == k) return;
  for (int v = next; v <= n; ++v) {
    const std::uint64_t bit = std::uint64_t{1} << (n - v);
    enumerate(n, k, v + 1, width + 1, {c.pos | bit, c.neg}, out);
    enumerate(n, k, v + 1, width + 1, {c.pos, c.neg | bit}, out);
  }
}

}  // namespace

KcnfResult learn_kcnf_baseline(Teacher& teacher, int k) {
  const int n = teacher.n();
  if (k < 0) throw InputError("clause width must be nonnegative");
  if (n > 64) throw ConfigError("clause learner supports n <= 64");
  const std::uint64_t count = kcnf_clause_count(n, k);
  if (count > kKcnfMaxClauses) {
    throw ConfigError("clause budget exceeded: " + std::to_string(count) + " clauses");
  }
  std::vector<Clause> clauses;
  clauses.reserve(count);
  enumerate(n, k, 1, 0, {}, clauses);

  KcnfResult out;
  out.initial_clauses = clauses.size();
  out.hypothesis = KcnfHypothesis(n, std::move(clauses));
  PhaseScope scope(teacher, Phase::kBaseline);
  while (true) {
    const EqResult r = teacher.eq(out.hypothesis);
    ++out.eq_count;
    if (r.correct) {
      out.learned = true;
      return out;
    }
    if (!r.label) throw ContractViolation("negative counterexample: target is not a k-CNF of this width");
    out.hypothesis.eliminate_violated(r.counterexample.lex_index());
  }
}

}  // namespace dnflearn
