#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "dnflearn/features.hpp"
#include "dnflearn/formula.hpp"
#include "dnflearn/profile.hpp"

namespace dnflearn {

// 1[ sum_j weights[j] * stem(monomials[j].pair) * prod(monomials[j].vars) >= threshold ]
struct AugPtf {
  int n = 0;
  std::vector<Term> stems;          // stem of each referenced catalog pair, by pair index
  std::vector<Feature> monomials;
  std::vector<mpz_class> weights;
  mpz_class threshold;
  mpz_class denominator;            // shared denominator cleared from the approximators
  mpz_class total_weight;           // sum of |weights|
  int degree = 0;                   // composed polynomial degree d * e
  std::vector<int> witness;         // catalog pair used for each term of f

  bool evaluate(const Assignment& x) const;
  std::string to_json() const;
};

// Thrown when the catalog has no witnessing pair for some term.
class NotFullyExpressive : public std::invalid_argument {
 public:
  NotFullyExpressive(int term_index, const std::string& term)
      : std::invalid_argument("catalog is not fully expressive: term " + std::to_string(term_index) + " (" + term +
                              ") has no witnessing pair"),
        term_index_(term_index) {}
  int term_index() const { return term_index_; }

 private:
  int term_index_;
};

// Sums D * stem_i * q_{B_i} over the terms, where B_i is the part of term i outside
// its witnessing stem and D is the least common denominator of all coefficients;
// threshold ceil(3D/4). Uses profile.k for the approximators and profile.stem_slack
// for stem validity. Requires f.k() <= profile.k.
AugPtf build_aug_ptf(const Dnf& f, const FeatureCatalog& catalog, const ScaleProfile& profile);

// Exhaustive comparison with f over all 2^n points (n <= 24).
bool verify_ptf(const Dnf& f, const AugPtf& p);

}  // namespace dnflearn
