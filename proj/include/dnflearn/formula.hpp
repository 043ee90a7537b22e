#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnflearn/bitvec.hpp"

namespace dnflearn {

// Sets of variable indices. Variable x_i (1-based) lives at bit i-1.
using VarSet = BitVec;

inline VarSet var_set(std::initializer_list<int> vars) {
  VarSet s;
  for (int v : vars) s.set(v - 1);
  return s;
}
// Ascending 1-based indices.
std::vector<int> var_list(const VarSet& s);
// "{1,3,4}"
std::string var_set_string(const VarSet& s);

struct Literal {
  int var = 1;  // 1-based
  bool positive = true;

  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

inline Literal pos(int var) { return {var, true}; }
inline Literal neg(int var) { return {var, false}; }

// A point of {0,1}^n. Lexicographic order treats x_1 as the most significant bit,
// so "00" < "01" < "10" < "11".
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int n);

  // "0110" means x1=0, x2=1, x3=1, x4=0.
  static Assignment from_string(std::string_view bits);
  // Requires n <= 64.
  static Assignment from_lex_index(int n, std::uint64_t index);
  static Assignment ones(int n);

  int n() const { return n_; }
  bool get(int var) const { return bits_.test(var - 1); }
  void set(int var, bool v) { bits_.assign(var - 1, v); }
  void flip(int var) { bits_.flip(var - 1); }
  Assignment flipped(int var) const {
    Assignment a = *this;
    a.flip(var);
    return a;
  }

  const BitVec& bits() const { return bits_; }
  // Bits in the "x_i at bit i-1" layout; requires n <= 64.
  std::uint64_t word() const { return bits_.word(0); }
  std::uint64_t lex_index() const;
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend std::strong_ordering operator<=>(const Assignment& a, const Assignment& b);

 private:
  int n_ = 0;
  BitVec bits_;
};

// A conjunction of literals, stored as a pair of masks. Construction rejects a term
// that would contain both x_i and its negation.
class Term {
 public:
  Term() = default;
  Term(std::initializer_list<Literal> lits);
  explicit Term(std::span<const Literal> lits);
  static Term from_masks(const BitVec& pos, const BitVec& neg);

  // Adds a literal; throws InputError if the opposite literal is already present.
  void add(Literal lit);
  void remove_var(int var);

  const BitVec& pos_mask() const { return pos_; }
  const BitVec& neg_mask() const { return neg_; }
  VarSet vars() const { return pos_ | neg_; }
  int size() const { return pos_.count() + neg_.count(); }
  bool empty() const { return pos_.none() && neg_.none(); }
  int max_var() const;  // 0 for the empty term

  bool contains(Literal lit) const {
    return lit.positive ? pos_.test(lit.var - 1) : neg_.test(lit.var - 1);
  }
  bool is_subset_of(const Term& other) const {
    return pos_.is_subset_of(other.pos_) && neg_.is_subset_of(other.neg_);
  }
  // Literals of *this that are not in other.
  Term minus(const Term& other) const { return from_masks(pos_.minus(other.pos_), neg_.minus(other.neg_)); }
  // Drops every literal whose variable is in s.
  Term without_vars(const VarSet& s) const { return from_masks(pos_.minus(s), neg_.minus(s)); }

  // Unchecked evaluation (no dimension test).
  bool eval(const Assignment& x) const {
    const BitVec& b = x.bits();
    return pos_.is_subset_of(b) && !neg_.intersects(b);
  }
  // Smallest variable whose literal x violates, or 0 if x satisfies the term.
  int first_violated(const Assignment& x) const;

  std::vector<Literal> literals() const;  // ascending variable
  // "x1 & ~x3", or "1" for the empty term.
  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  BitVec pos_;
  BitVec neg_;
};

// The conjunction of the literals of y at the given variables.
Term term_from_point(const Assignment& y, const VarSet& vars);

// An ordered list of terms over n variables. Coordinates in pinned() were fixed by a
// restriction: no term mentions them and noise never perturbs them.
class Dnf {
 public:
  Dnf() = default;
  Dnf(int n, std::vector<Term> terms, VarSet pinned = {});

  int n() const { return n_; }
  int k() const { return static_cast<int>(terms_.size()); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& term(int i) const { return terms_[static_cast<std::size_t>(i)]; }
  const VarSet& pinned() const { return pinned_; }
  VarSet free_vars() const { return BitVec::low_mask(n_).minus(pinned_); }
  // Union of variables mentioned by any term.
  VarSet support() const;
  int max_term_length() const;

  std::string to_string() const;

  friend bool operator==(const Dnf&, const Dnf&) = default;

 private:
  int n_ = 0;
  std::vector<Term> terms_;
  VarSet pinned_;
};

bool eval_term(const Term& t, const Assignment& x);
bool eval_dnf(const Dnf& f, const Assignment& x);
std::vector<int> satisfied_terms(const Dnf& f, const Assignment& x);
std::pair<Dnf, Dnf> split_by_length(const Dnf& f, int max_len);
VarSet protected_set(const Dnf& f, const Assignment& y);
VarSet unanimous_indices(std::span<const Term> terms);
std::vector<Term> strip_terms(std::span<const Term> terms, const VarSet& s);
Dnf restrict(const Dnf& f, const Term& stem);
Assignment hybrid(const Assignment& z, const Assignment& y, const VarSet& r);
bool is_valid_stem(const Term& stem, const Term& t, int slack);

// Truth table of f over all 2^n points in lexicographic order, one bit per point.
// Requires n <= 30.
std::vector<std::uint64_t> truth_table(const Dnf& f);
inline bool table_bit(const std::vector<std::uint64_t>& table, std::uint64_t index) {
  return (table[index >> 6] >> (index & 63)) & 1U;
}

// Masks re-expressed in lexicographic-index space, where x_i is bit n-i.
std::uint64_t to_lex_mask(const VarSet& s, int n);

}  // namespace dnflearn
