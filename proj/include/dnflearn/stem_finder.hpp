#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnflearn/features.hpp"
#include "dnflearn/formula.hpp"
#include "dnflearn/profile.hpp"
#include "dnflearn/teacher.hpp"

namespace dnflearn {

struct StemFinderConfig {
  int reps = 1;
  std::uint64_t seed = 0;

  // ceil(4 * 2^(sqrt(k) * log2(k+1))) * ceil(log2 n).
  static int default_reps(int k, int n);
};

// One position of a flipping walk. At steps 0..n-1 the walk considers flipping
// variable `flip_var`; step n only generates a stem.
struct WalkStep {
  Assignment z;
  int flip_var = 0;  // 1-based, 0 at the final step
  bool flipped = false;
  Term generated;    // raw generator output at z (before the T'(y) = 1 filter)
  bool kept = false;
};

struct WalkTrace {
  Assignment y;
  std::vector<int> perm;  // 1-based variables in visiting order
  std::vector<WalkStep> steps;
};

// Literals of y at the coordinates whose flip makes f false. Uses exactly n MQs.
// Precondition f(y) = 1 is checked white-box (no query is spent on it).
Term generate_candidate_stem(Teacher& teacher, const Assignment& y);

struct StemSearchResult {
  std::vector<EligiblePair> pairs;  // deduplicated, first-seen order, all with R empty
  std::uint64_t emitted = 0;        // outputs before deduplication
};

// `reps` random-permutation walks from y; walk r draws its permutation from
// derive_seed(cfg.seed, r). If traces is non-null one trace per walk is appended.
StemSearchResult find_candidate_stems(Teacher& teacher, const Assignment& y, const StemFinderConfig& cfg,
                                      std::vector<WalkTrace>* traces = nullptr);

// Per-call output bound reps * (n + 1), exported for the mistake-cap formula.
std::uint64_t stem_output_cap(const StemFinderConfig& cfg, int n);

struct AuditViolation {
  int step = 0;
  std::string lemma;  // "sat-monotone", "flipped-absent", ...
  std::string detail;
};

struct AuditReport {
  std::vector<AuditViolation> violations;
  int steps_checked = 0;
  int conditioning_broken_at = -1;  // step whose flip moved a protected coordinate
  int valid_stem_steps = 0;         // steps where the short-stripped-term check fired

  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};

// White-box check of the walk invariants against the hidden target. On every step
// whose point still agrees with y on the protected set:
//   sat-monotone    satisfied terms only shrink along the walk
//   flipped-absent  flipped coordinates occur in no currently satisfied term
//   stripped-unseen variables of stripped satisfied terms were not yet visited
//   stripped-shrink each stripped satisfied term is a sub-term of an earlier one and
//                   their number never grows
//   unanimous-zero  flipping a unanimous, unprotected coordinate falsifies f
//   short-stripped  a stripped term of length <= k forces the generated stem to be
//                   valid for a term that y satisfies
// Plus structural checks on the trace itself ("trace"). Throws InputError if the
// trace does not belong to f.
AuditReport audit_walk(const Dnf& f, const WalkTrace& trace, const ScaleProfile& profile);

}  // namespace dnflearn
