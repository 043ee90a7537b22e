#pragma once

#include <string>
#include <vector>

#include "dnflearn/formula.hpp"
#include "dnflearn/random.hpp"

namespace dnflearn {

// How term lengths are chosen when sampling a random DNF.
struct LengthProfile {
  enum class Kind { kFixed, kMixed, kUniform, kExplicit };

  Kind kind = Kind::kFixed;
  int a = 3;          // fixed length / short length / uniform low end
  int b = 3;          // long length / uniform high end
  int num_long = -1;  // mixed: how many long terms; -1 means ceil(k/2)
  std::vector<int> lengths;  // explicit per-term lengths

  static LengthProfile fixed(int len) { return {Kind::kFixed, len, len, -1, {}}; }
  static LengthProfile mixed(int short_len, int long_len, int num_long = -1) {
    return {Kind::kMixed, short_len, long_len, num_long, {}};
  }
  static LengthProfile uniform(int lo, int hi) { return {Kind::kUniform, lo, hi, -1, {}}; }
  static LengthProfile explicit_lengths(std::vector<int> ls) {
    return {Kind::kExplicit, 0, 0, -1, std::move(ls)};
  }

  int max_length() const;
  std::string describe() const;
};

// Inverse of LengthProfile::describe: "fixed:L", "mixed:S,L[,num_long]",
// "uniform:LO,HI", "explicit:L1,L2,...".
LengthProfile parse_length_profile(const std::string& s);

// k terms; each term picks distinct variables uniformly and independent uniform
// polarities. Lengths come from the profile (mixed puts the long terms first).
// Throws InputError when some length exceeds n.
Dnf gen_random_dnf(int n, int k, const LengthProfile& lengths, Rng& rng);

// A uniformly random term of the given length over variables {1..n} \ avoid.
Term random_term(int n, int len, Rng& rng, const VarSet& avoid = {});

}  // namespace dnflearn
