#include "dnflearn/teacher.hpp"

#include <nlohmann/json.hpp>

#include "dnflearn/errors.hpp"

namespace dnflearn {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kOther:
      return "other";
    case Phase::kStem:
      return "stem";
    case Phase::kNoise:
      return "noise";
    case Phase::kWinnow:
      return "winnow";
    case Phase::kBaseline:
      return "baseline";
  }
  return "?";
}

std::string QueryLog::to_json() const {
  nlohmann::ordered_json j;
  j["mq"] = mq_count;
  j["eq"] = eq_count;
  nlohmann::ordered_json mq_p;
  nlohmann::ordered_json eq_p;
  for (int i = 0; i < kNumPhases; ++i) {
    mq_p[phase_name(static_cast<Phase>(i))] = mq_by_phase[static_cast<std::size_t>(i)];
    eq_p[phase_name(static_cast<Phase>(i))] = eq_by_phase[static_cast<std::size_t>(i)];
  }
  j["mq_by_phase"] = mq_p;
  j["eq_by_phase"] = eq_p;
  j["exact_noise_evals"] = exact_noise_evals;
  return j.dump();
}

std::string CexPolicy::name() const {
  switch (kind) {
    case CexPolicyKind::kLexMin:
      return "lex_min";
    case CexPolicyKind::kUniformRandom:
      return "uniform_random(" + std::to_string(seed) + ")";
    case CexPolicyKind::kPositiveFirstLex:
      return "positive_first_lex";
  }
  return "?";
}

Teacher::Teacher(Dnf target, CexPolicy policy, int n_cap)
    : target_(std::move(target)), policy_(policy), n_cap_(n_cap), policy_rng_(policy.seed) {
  if (n_cap_ < 0 || n_cap_ > 30) throw ConfigError("n_cap must lie in [0, 30]");
}

void Teacher::enable_approximate_eq(std::uint64_t samples, std::uint64_t seed) {
  approx_samples_ = samples;
  approx_rng_ = Rng(seed);
}

const std::vector<std::uint64_t>& Teacher::table() {
  if (!table_ready_) {
    table_ = truth_table(target_);
    table_ready_ = true;
  }
  return table_;
}

void Teacher::write_record(const char* kind, const std::string& input, int answer) {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j[std::string(kind) == "mq" ? "input" : "hypothesis"] = input;
  j["answer"] = answer;
  j["phase"] = phase_name(phase_);
  j["mq_count"] = log_.mq_count;
  j["eq_count"] = log_.eq_count;
  *transcript_ << j.dump() << '\n';
}

bool Teacher::mq(const Assignment& x) {
  if (x.n() != target_.n()) throw InputError("membership query dimension mismatch");
  ++log_.mq_count;
  ++log_.mq_by_phase[static_cast<std::size_t>(phase_)];
  bool v = false;
  for (const Term& t : target_.terms()) {
    if (t.eval(x)) {
      v = true;
      break;
    }
  }
  if (transcript_ != nullptr) write_record("mq", x.to_string(), v ? 1 : 0);
  return v;
}

EqResult Teacher::eq(const Hypothesis& h) {
  const int n = target_.n();
  const bool approximate = approx_samples_ > 0 && n > n_cap_;
  if (n > n_cap_ && !approximate) {
    throw ConfigError("exact equivalence query needs n <= " + std::to_string(n_cap_) + " (got " +
                      std::to_string(n) + ")");
  }
  ++log_.eq_count;
  ++log_.eq_by_phase[static_cast<std::size_t>(phase_)];

  EqResult r;
  r.correct = true;
  if (approximate) {
    for (std::uint64_t s = 0; s < approx_samples_; ++s) {
      Assignment x(n);
      for (int v = 1; v <= n; ++v) x.set(v, approx_rng_.bernoulli(0.5));
      const bool fx = eval_dnf(target_, x);
      if (h.evaluate(x) != fx) {
        r = {false, x, fx};
        break;
      }
    }
  } else {
    const auto& tt = table();
    const std::uint64_t points = std::uint64_t{1} << n;
    switch (policy_.kind) {
      case CexPolicyKind::kLexMin:
        for (std::uint64_t p = 0; p < points; ++p) {
          const bool fx = table_bit(tt, p);
          if (h.evaluate_lex(n, p) != fx) {
            r = {false, Assignment::from_lex_index(n, p), fx};
            break;
          }
        }
        break;
      case CexPolicyKind::kPositiveFirstLex: {
        std::optional<std::uint64_t> first_neg;
        for (std::uint64_t p = 0; p < points; ++p) {
          const bool fx = table_bit(tt, p);
          if (h.evaluate_lex(n, p) != fx) {
            if (fx) {
              r = {false, Assignment::from_lex_index(n, p), true};
              break;
            }
            if (!first_neg) first_neg = p;
          }
        }
        if (r.correct && first_neg) r = {false, Assignment::from_lex_index(n, *first_neg), false};
        break;
      }
      case CexPolicyKind::kUniformRandom: {
        std::vector<std::uint64_t> bad;
        for (std::uint64_t p = 0; p < points; ++p)
          if (h.evaluate_lex(n, p) != table_bit(tt, p)) bad.push_back(p);
        if (!bad.empty()) {
          const std::uint64_t p = bad[static_cast<std::size_t>(policy_rng_.below(bad.size()))];
          r = {false, Assignment::from_lex_index(n, p), table_bit(tt, p)};
        }
        break;
      }
    }
  }
  if (transcript_ != nullptr) {
    write_record("eq", h.id(), r.correct ? -1 : 0);
    if (!r.correct) {
      nlohmann::ordered_json j;
      j["kind"] = "counterexample";
      j["point"] = r.counterexample.to_string();
      j["label"] = r.label ? 1 : 0;
      *transcript_ << j.dump() << '\n';
    }
  }
  return r;
}

std::uint64_t Teacher::count_disagreements(const Hypothesis& h) const {
  const int n = target_.n();
  if (n > 30) throw ConfigError("exhaustive comparison needs n <= 30");
  std::uint64_t bad = 0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    Assignment x = Assignment::from_lex_index(n, p);
    if (h.evaluate(x) != eval_dnf(target_, x)) ++bad;
  }
  return bad;
}

bool exhaustively_equal(const Dnf& f, const Hypothesis& h) {
  const int n = f.n();
  if (n > 30) throw ConfigError("exhaustive comparison needs n <= 30");
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    Assignment x = Assignment::from_lex_index(n, p);
    if (h.evaluate(x) != eval_dnf(f, x)) return false;
  }
  return true;
}

}  // namespace dnflearn
