#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnflearn/formula.hpp"

namespace dnflearn {

// A candidate stem together with its auxiliary variables. R never meets the
// stem's variables.
struct EligiblePair {
  Term stem;
  VarSet r;

  friend bool operator==(const EligiblePair&, const EligiblePair&) = default;
};

// Degree of the composed Chebyshev approximator for conjunctions of length <= 2k:
// ceil(sqrt(2k)) * ceil(log2(2k)).
int chebyshev_degree(int k);
// Largest monomial degree the learner's features need: the composed degree, capped
// at 2k because a multilinear polynomial over <= 2k variables has no larger
// monomials.
int default_d_max(int k);

// sum_{d=0}^{dmax} C(r, d), saturating at UINT64_MAX.
std::uint64_t binomial_prefix(int r, int dmax);

// An augmented monomial: stem of pair `pair` times the product of `vars` (a subset of
// that pair's R).
struct Feature {
  int pair = 0;
  VarSet vars;

  friend bool operator==(const Feature&, const Feature&) = default;
};

// The growing set of eligible pairs. Always holds (empty stem, empty R) at index 0.
class FeatureCatalog {
 public:
  explicit FeatureCatalog(int d_max);

  int d_max() const { return d_max_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  const std::vector<EligiblePair>& pairs() const { return pairs_; }
  const EligiblePair& pair(int j) const { return pairs_[static_cast<std::size_t>(j)]; }

  // Appends a pair; returns its index. Throws InputError if R meets the stem.
  int add(const EligiblePair& p);
  // Index of the pair whose stem equals `stem`, or -1.
  int find_stem(const Term& stem) const;
  // Adds one auxiliary variable to pair j's R.
  void add_to_r(int j, int var);

  // Bumped by every mutation, so a stale learner state can be detected.
  std::uint64_t snapshot_id() const { return snapshot_; }

  std::uint64_t feature_count() const;
  int max_r() const;

 private:
  int d_max_;
  std::vector<EligiblePair> pairs_;
  std::uint64_t snapshot_ = 0;
};

// Pair-major; inside a pair, subsets in colexicographic order (the numeric value of
// the subset's bitmask over R's ascending variables), degree <= d_max.
std::vector<Feature> enumerate_features(const FeatureCatalog& catalog);

bool eval_feature(const FeatureCatalog& catalog, const Feature& feat, const Assignment& x);

// For term t: the pair index witnessing it (stem is a valid stem of t with the given
// slack and t minus stem lies inside R), picking the smallest |R| and then the lowest
// index; nullopt if none.
std::optional<int> find_witness(const FeatureCatalog& catalog, const Term& t, int slack);
bool is_fully_expressive(const FeatureCatalog& catalog, const Dnf& f, int slack);

}  // namespace dnflearn
