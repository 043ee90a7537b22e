#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dnflearn/formula.hpp"
#include "dnflearn/profile.hpp"
#include "dnflearn/random.hpp"
#include "dnflearn/teacher.hpp"

namespace dnflearn {

// E[f(y)] where y keeps each free (unpinned) coordinate of x with probability rho and
// flips it otherwise. Enumerates every flip pattern over the variables f mentions;
// throws ConfigError if there are more than kEnumMaxVars of them.
inline constexpr int kEnumMaxVars = 24;
double noise_exact_enum(const Dnf& f, const Assignment& x, double rho);

// Same quantity by inclusion-exclusion over term subsets; throws ConfigError if
// k > kIeMaxTerms.
inline constexpr int kIeMaxTerms = 20;
double noise_exact_ie(const Dnf& f, const Assignment& x, double rho);

// Mean of `samples` membership answers at independent noisy copies of x. Pinned
// coordinates are never perturbed.
double noise_sampled(const std::function<bool(const Assignment&)>& mq, const Assignment& x, double rho,
                     std::uint64_t samples, Rng& rng, const VarSet& pinned = {});

// Hoeffding sample count for additive error gap/2 with failure probability kappa:
// ceil(8 ln(2/kappa) / gap^2).
std::uint64_t hoeffding_samples(double gap, double kappa);

enum class NoiseMode { kExactEnum, kExactIe, kSampled };
const char* noise_mode_name(NoiseMode m);
NoiseMode parse_noise_mode(const std::string& s);  // enum | ie | sampled

struct NoiseOracle {
  NoiseMode mode = NoiseMode::kExactIe;
  std::uint64_t samples = 0;  // sampled mode only
  std::uint64_t seed = 0;

  static NoiseOracle exact_enum() { return {NoiseMode::kExactEnum, 0, 0}; }
  static NoiseOracle exact_ie() { return {NoiseMode::kExactIe, 0, 0}; }
  static NoiseOracle sampled(std::uint64_t samples, std::uint64_t seed) { return {NoiseMode::kSampled, samples, seed}; }
};

// The noised value of the target restricted by `stem`, evaluated at x (which must
// satisfy the stem). Exact modes read the target white-box and count one exact
// evaluation; sampled mode spends `samples` MQs with stem coordinates held fixed.
// `eval_index` separates the sampled-mode random streams of different evaluations.
double noised_restricted_value(Teacher& teacher, const Term& stem, const Assignment& x, double rho,
                               const NoiseOracle& oracle, std::uint64_t eval_index);

struct FrvUpdated {
  int var = 0;       // coordinate added to R
  Assignment x;      // walk point before the flip
  double low = 0.0;  // noised value at x
  double high = 0.0; // noised value after flipping var
};
struct FrvFail {
  int walk_length = 0;
};
using FrvOutcome = std::variant<FrvUpdated, FrvFail>;

struct FrvOptions {
  bool bisection = false;  // faster search; the linear scan is the reference
};

// Walks from z toward hybrid(z, y, R), flipping differing coordinates in ascending
// order, and reports the first flip that raises the noised restricted value by at
// least profile.gap. Preconditions (checked white-box): f(y) = 1, f(z) = 0, both
// satisfy the stem, R disjoint from the stem.
FrvOutcome find_relevant_variable(Teacher& teacher, const Term& stem, const VarSet& r, const Assignment& y,
                                  const Assignment& z, const ScaleProfile& profile, const NoiseOracle& oracle,
                                  std::uint64_t call_index = 0, const FrvOptions& options = {});

// Variables occurring in a term of length <= profile.medium_cutoff.
VarSet morally_relevant(const Dnf& g, const ScaleProfile& profile);

struct ClaimCheck {
  std::string claim;
  bool pass = true;
  double bound = 0.0;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double worst = 0.0;        // smallest value (lower-bound claims) or largest (upper-bound)
  std::string witness;       // point achieving `worst`
};

struct NoiseClaimsReport {
  ClaimCheck short_term;     // T f(y) >= 0.9 when y satisfies a term of length <= tau
  ClaimCheck no_medium;      // T f(y) <= bound when y satisfies no term of length <= cutoff
  ClaimCheck irrelevant_flip;// |T f(y) - T f(y^S)| <= bound for morally irrelevant S
  bool pass() const { return short_term.pass && no_medium.pass && irrelevant_flip.pass; }
  std::string to_json() const;
};

// Bounds recomputed from the proofs at the profile's constants.
double no_medium_bound(const ScaleProfile& profile);       // 0.01 + k rho^cutoff + 1 - rho^k
double irrelevant_flip_bound(const ScaleProfile& profile); // 2 k rho^cutoff

// Exhaustive over {0,1}^n when n <= exhaustive_n, otherwise `samples` random points
// per claim (points for the short-term claim are drawn inside short terms). Uses
// inclusion-exclusion when k <= kIeMaxTerms, enumeration otherwise.
NoiseClaimsReport check_noise_claims(const Dnf& f, const ScaleProfile& profile, std::uint64_t seed = 1,
                                     int exhaustive_n = 12, int samples = 2000);

}  // namespace dnflearn
