#include "dnflearn/stem_finder.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dnflearn/errors.hpp"
#include "dnflearn/random.hpp"

namespace dnflearn {

int StemFinderConfig::default_reps(int k, int n) {
  if (k < 1 || n < 1) throw ConfigError("default_reps needs k >= 1 and n >= 1");
  const double inner = 4.0 * std::exp2(std::sqrt(static_cast<double>(k)) * std::log2(k + 1.0));
  int log_n = 0;
  while ((1LL << log_n) < n) ++log_n;
  return static_cast<int>(std::ceil(inner)) * std::max(log_n, 1);
}

std::uint64_t stem_output_cap(const StemFinderConfig& cfg, int n) {
  return static_cast<std::uint64_t>(cfg.reps) * static_cast<std::uint64_t>(n + 1);
}

Term generate_candidate_stem(Teacher& teacher, const Assignment& y) {
  if (!eval_dnf(teacher.white_box_target(), y)) {
    throw ContractViolation("stem generation needs a positive point");
  }
  VarSet killers;
  for (int v = 1; v <= y.n(); ++v)
    if (!teacher.mq(y.flipped(v))) killers.set(v - 1);
  return term_from_point(y, killers);
}

StemSearchResult find_candidate_stems(Teacher& teacher, const Assignment& y, const StemFinderConfig& cfg,
                                      std::vector<WalkTrace>* traces) {
  if (cfg.reps < 1) throw ConfigError("stem finder needs reps >= 1");
  if (!eval_dnf(teacher.white_box_target(), y)) {
    throw ContractViolation("stem search needs a positive point");
  }
  PhaseScope scope(teacher, Phase::kStem);
  const int n = y.n();
  StemSearchResult out;
  auto emit = [&](const Term& t) {
    ++out.emitted;
    EligiblePair p{t, {}};
    if (std::find(out.pairs.begin(), out.pairs.end(), p) == out.pairs.end()) out.pairs.push_back(p);
  };

  for (int rep = 0; rep < cfg.reps; ++rep) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
    std::vector<int> perm = rng.permutation(n);
    for (int& v : perm) ++v;

    WalkTrace* trace = nullptr;
    if (traces != nullptr) {
      traces->push_back({y, perm, {}});
      trace = &traces->back();
    }

    Assignment z = y;
    for (int i = 0; i <= n; ++i) {
      const Term t = generate_candidate_stem(teacher, z);
      const bool keep = t.eval(y);
      if (keep) emit(t);
      WalkStep step{z, 0, false, t, keep};
      if (i < n) {
        const int v = perm[static_cast<std::size_t>(i)];
        step.flip_var = v;
        Assignment cand = z.flipped(v);
        if (teacher.mq(cand)) {
          z = cand;
          step.flipped = true;
        }
      }
      if (trace != nullptr) trace->steps.push_back(std::move(step));
    }
  }
  return out;
}

std::string AuditReport::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok();
  j["steps_checked"] = steps_checked;
  j["conditioning_broken_at"] = conditioning_broken_at;
  j["valid_stem_steps"] = valid_stem_steps;
  nlohmann::ordered_json vs = nlohmann::ordered_json::array();
  for (const AuditViolation& v : violations) {
    vs.push_back({{"step", v.step}, {"lemma", v.lemma}, {"detail", v.detail}});
  }
  j["violations"] = vs;
  return j.dump();
}

namespace {

std::vector<Term> terms_at(const Dnf& f, const std::vector<int>& idx) {
  std::vector<Term> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(f.term(i));
  return out;
}

std::string stringify(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + "]";
}

}  // namespace

AuditReport audit_walk(const Dnf& f, const WalkTrace& trace, const ScaleProfile& profile) {
  const int n = f.n();
  const Assignment& y = trace.y;
  if (y.n() != n) throw InputError("trace dimension differs from the target's");
  if (static_cast<int>(trace.perm.size()) != n || static_cast<int>(trace.steps.size()) != n + 1) {
    throw InputError("trace length does not match dimension");
  }
  if (!eval_dnf(f, y)) throw InputError("trace start point is not positive for the target");
  if (trace.steps.front().z != y) throw InputError("trace does not start at y");

  AuditReport rep;
  auto violate = [&](int step, const char* lemma, std::string detail) {
    rep.violations.push_back({step, lemma, std::move(detail)});
  };

  // Structural checks: permutation, single-coordinate moves, flip decisions.
  {
    std::vector<bool> seen(static_cast<std::size_t>(n + 1), false);
    for (int v : trace.perm) {
      if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) {
        throw InputError("trace permutation is not a permutation of 1..n");
      }
      seen[static_cast<std::size_t>(v)] = true;
    }
  }
  for (int i = 0; i < n; ++i) {
    const WalkStep& s = trace.steps[static_cast<std::size_t>(i)];
    const WalkStep& next = trace.steps[static_cast<std::size_t>(i + 1)];
    if (s.flip_var != trace.perm[static_cast<std::size_t>(i)]) {
      violate(i, "trace", "step considers x" + std::to_string(s.flip_var) + " but the permutation says x" +
                              std::to_string(trace.perm[static_cast<std::size_t>(i)]));
    }
    const Assignment expect = s.flipped ? s.z.flipped(s.flip_var) : s.z;
    if (next.z != expect) violate(i, "trace", "next point is not the recorded single flip");
    if (s.flipped != eval_dnf(f, s.z.flipped(s.flip_var))) {
      violate(i, "trace", "flip decision disagrees with the target");
    }
  }

  const VarSet prot = protected_set(f, y);
  const std::vector<int> sat_y = satisfied_terms(f, y);
  const int k = f.k();

  std::vector<int> prev_sat;
  std::vector<Term> prev_stripped;
  VarSet visited;  // coordinates pi(t) for t < i
  for (int i = 0; i <= n; ++i) {
    const WalkStep& s = trace.steps[static_cast<std::size_t>(i)];
    const Assignment& z = s.z;
    if ((z.bits() ^ y.bits()).intersects(prot)) {
      // The flip at step i-1 moved a protected coordinate; nothing below is promised.
      rep.conditioning_broken_at = i - 1;
      break;
    }
    ++rep.steps_checked;
    const std::vector<int> sat = satisfied_terms(f, z);
    if (sat.empty()) {
      violate(i, "trace", "walk point is not positive");
      break;
    }
    const std::vector<Term> sat_terms = terms_at(f, sat);

    if (i > 0 && !std::includes(prev_sat.begin(), prev_sat.end(), sat.begin(), sat.end())) {
      violate(i, "sat-monotone", "satisfied " + stringify(sat) + " not within previous " + stringify(prev_sat));
    }

    const VarSet moved = z.bits() ^ y.bits();
    for (const Term& t : sat_terms) {
      if (t.vars().intersects(moved)) {
        violate(i, "flipped-absent", "satisfied term " + t.to_string() + " mentions a flipped coordinate");
      }
    }

    const VarSet unanimous = unanimous_indices(sat_terms);
    const std::vector<Term> stripped = strip_terms(sat_terms, prot | unanimous);
    VarSet stripped_vars;
    for (const Term& t : stripped) stripped_vars |= t.vars();
    if (stripped_vars.intersects(visited)) {
      violate(i, "stripped-unseen",
              "stripped variables " + var_set_string(stripped_vars & visited) + " were already visited");
    }

    if (i > 0) {
      // Stripping by a growing unanimous set shortens terms, so containment is checked
      // per term (each is a sub-term of an earlier one) and by count.
      for (const Term& t : stripped) {
        const bool covered = std::any_of(prev_stripped.begin(), prev_stripped.end(),
                                         [&](const Term& p) { return t.is_subset_of(p); });
        if (!covered) violate(i, "stripped-shrink", "stripped term " + t.to_string() + " is new");
      }
      if (stripped.size() > prev_stripped.size()) {
        violate(i, "stripped-shrink", "stripped set grew to " + std::to_string(stripped.size()));
      }
    }

    unanimous.minus(prot).for_each_set([&](int b) {
      if (eval_dnf(f, z.flipped(b + 1))) {
        violate(i, "unanimous-zero", "flipping unanimous x" + std::to_string(b + 1) + " keeps f true");
      }
    });

    const bool has_short = std::any_of(stripped.begin(), stripped.end(), [&](const Term& t) { return t.size() <= k; });
    if (has_short) {
      ++rep.valid_stem_steps;
      const bool valid = std::any_of(sat_y.begin(), sat_y.end(), [&](int ti) {
        return is_valid_stem(s.generated, f.term(ti), profile.stem_slack);
      });
      if (!valid) {
        violate(i, "short-stripped", "generated " + s.generated.to_string() + " is not a valid stem of any term y satisfies");
      }
    }

    prev_sat = sat;
    prev_stripped = stripped;
    if (i < n) visited.set(trace.perm[static_cast<std::size_t>(i)] - 1);
  }
  return rep;
}

}  // namespace dnflearn
