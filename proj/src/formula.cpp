#include "dnflearn/formula.hpp"

#include <algorithm>
#include <sstream>

#include "dnflearn/errors.hpp"

namespace dnflearn {

std::vector<int> var_list(const VarSet& s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(s.count()));
  s.for_each_set([&](int pos) { out.push_back(pos + 1); });
  return out;
}

std::string var_set_string(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each_set([&](int pos) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(pos + 1);
  });
  out += '}';
  return out;
}

namespace {

void check_dimension(int n) {
  if (n < 0 || n > kMaxVars) {
    throw InputError("dimension " + std::to_string(n) + " outside [0, " +
                     std::to_string(kMaxVars) + "]");
  }
}

void check_var(int var) {
  if (var < 1 || var > kMaxVars) throw InputError("variable index " + std::to_string(var) + " out of range");
}

}  // namespace

// ---------------------------------------------------------------- Assignment

Assignment::Assignment(int n) : n_(n) { check_dimension(n); }

Assignment Assignment::from_string(std::string_view bits) {
  Assignment a(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      a.bits_.set(static_cast<int>(i));
    } else if (bits[i] != '0') {
      throw InputError("assignment string may only contain '0' and '1'");
    }
  }
  return a;
}

Assignment Assignment::from_lex_index(int n, std::uint64_t index) {
  if (n > 64) throw InputError("lexicographic index needs n <= 64");
  Assignment a(n);
  std::uint64_t w = 0;
  for (int i = 0; i < n; ++i) {
    if ((index >> (n - 1 - i)) & 1U) w |= std::uint64_t{1} << i;
  }
  a.bits_.set_word(0, w);
  return a;
}

Assignment Assignment::ones(int n) {
  Assignment a(n);
  a.bits_ = BitVec::low_mask(n);
  return a;
}

std::uint64_t Assignment::lex_index() const {
  if (n_ > 64) throw InputError("lexicographic index needs n <= 64");
  std::uint64_t w = bits_.word(0);
  std::uint64_t p = 0;
  for (int i = 0; i < n_; ++i) {
    if ((w >> i) & 1U) p |= std::uint64_t{1} << (n_ - 1 - i);
  }
  return p;
}

std::string Assignment::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int i = 0; i < n_; ++i)
    if (bits_.test(i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

std::strong_ordering operator<=>(const Assignment& a, const Assignment& b) {
  if (a.n_ != b.n_) return a.n_ <=> b.n_;
  // Lexicographic with x_1 most significant: the first differing variable decides.
  BitVec diff = a.bits_ ^ b.bits_;
  int first = diff.first();
  if (first < 0) return std::strong_ordering::equal;
  return a.bits_.test(first) ? std::strong_ordering::greater : std::strong_ordering::less;
}

// ---------------------------------------------------------------------- Term

Term::Term(std::initializer_list<Literal> lits) {
  for (const Literal& l : lits) add(l);
}

Term::Term(std::span<const Literal> lits) {
  for (const Literal& l : lits) add(l);
}

Term Term::from_masks(const BitVec& pos, const BitVec& neg) {
  if (pos.intersects(neg)) throw InputError("term contains a variable with both polarities");
  Term t;
  t.pos_ = pos;
  t.neg_ = neg;
  return t;
}

void Term::add(Literal lit) {
  check_var(lit.var);
  const int b = lit.var - 1;
  if (lit.positive ? neg_.test(b) : pos_.test(b)) {
    throw InputError("term would contain both x" + std::to_string(lit.var) + " and its negation");
  }
  (lit.positive ? pos_ : neg_).set(b);
}

void Term::remove_var(int var) {
  check_var(var);
  pos_.reset(var - 1);
  neg_.reset(var - 1);
}

int Term::max_var() const { return vars().last() + 1; }

int Term::first_violated(const Assignment& x) const {
  const BitVec& b = x.bits();
  BitVec bad = pos_.minus(b) | (neg_ & b);
  return bad.first() + 1;
}

std::vector<Literal> Term::literals() const {
  std::vector<Literal> out;
  vars().for_each_set([&](int b) { out.push_back({b + 1, pos_.test(b)}); });
  return out;
}

std::string Term::to_string() const {
  if (empty()) return "1";
  std::string s;
  for (const Literal& l : literals()) {
    if (!s.empty()) s += " & ";
    if (!l.positive) s += '~';
    s += 'x';
    s += std::to_string(l.var);
  }
  return s;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.pos_ <=> b.pos_; c != 0) return c;
  return a.neg_ <=> b.neg_;
}

Term term_from_point(const Assignment& y, const VarSet& vars) {
  return Term::from_masks(vars & y.bits(), vars.minus(y.bits()));
}

// ----------------------------------------------------------------------- Dnf

Dnf::Dnf(int n, std::vector<Term> terms, VarSet pinned)
    : n_(n), terms_(std::move(terms)), pinned_(pinned) {
  check_dimension(n);
  const BitVec in_range = BitVec::low_mask(n);
  if (!pinned_.is_subset_of(in_range)) throw InputError("pinned coordinate outside dimension");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const VarSet v = terms_[i].vars();
    if (!v.is_subset_of(in_range)) {
      throw InputError("term " + std::to_string(i) + " uses a variable above n=" + std::to_string(n));
    }
    if (v.intersects(pinned_)) {
      throw InputError("term " + std::to_string(i) + " mentions a pinned coordinate");
    }
  }
}

VarSet Dnf::support() const {
  VarSet s;
  for (const Term& t : terms_) s |= t.vars();
  return s;
}

int Dnf::max_term_length() const {
  int m = 0;
  for (const Term& t : terms_) m = std::max(m, t.size());
  return m;
}

std::string Dnf::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const Term& t : terms_) {
    if (!s.empty()) s += " | ";
    s += '(' + t.to_string() + ')';
  }
  return s;
}

// ---------------------------------------------------------------- operations

bool eval_term(const Term& t, const Assignment& x) {
  if (t.max_var() > x.n()) throw InputError("term mentions a variable beyond the assignment's dimension");
  return t.eval(x);
}

bool eval_dnf(const Dnf& f, const Assignment& x) {
  if (f.n() != x.n()) throw InputError("dimension mismatch between formula and assignment");
  for (const Term& t : f.terms())
    if (t.eval(x)) return true;
  return false;
}

std::vector<int> satisfied_terms(const Dnf& f, const Assignment& x) {
  if (f.n() != x.n()) throw InputError("dimension mismatch between formula and assignment");
  std::vector<int> out;
  for (int i = 0; i < f.k(); ++i)
    if (f.term(i).eval(x)) out.push_back(i);
  return out;
}

std::pair<Dnf, Dnf> split_by_length(const Dnf& f, int max_len) {
  if (max_len < 0) throw InputError("length threshold must be nonnegative");
  std::vector<Term> low;
  std::vector<Term> high;
  for (const Term& t : f.terms()) (t.size() <= max_len ? low : high).push_back(t);
  return {Dnf(f.n(), std::move(low), f.pinned()), Dnf(f.n(), std::move(high), f.pinned())};
}

VarSet protected_set(const Dnf& f, const Assignment& y) {
  if (f.n() != y.n()) throw InputError("dimension mismatch between formula and assignment");
  VarSet p;
  for (const Term& t : f.terms()) {
    int v = t.first_violated(y);
    if (v > 0) p.set(v - 1);
  }
  return p;
}

VarSet unanimous_indices(std::span<const Term> terms) {
  if (terms.empty()) throw InputError("unanimous indices of an empty term set are undefined");
  BitVec all_pos = terms.front().pos_mask();
  BitVec all_neg = terms.front().neg_mask();
  for (const Term& t : terms.subspan(1)) {
    all_pos &= t.pos_mask();
    all_neg &= t.neg_mask();
  }
  return all_pos | all_neg;
}

std::vector<Term> strip_terms(std::span<const Term> terms, const VarSet& s) {
  std::vector<Term> out;
  for (const Term& t : terms) {
    Term stripped = t.without_vars(s);
    if (std::find(out.begin(), out.end(), stripped) == out.end()) out.push_back(stripped);
  }
  return out;
}

Dnf restrict(const Dnf& f, const Term& stem) {
  const VarSet sv = stem.vars();
  if (!sv.is_subset_of(BitVec::low_mask(f.n()))) throw InputError("stem uses a variable beyond n");
  if (sv.intersects(f.pinned())) throw InputError("stem re-pins an already pinned coordinate");
  std::vector<Term> kept;
  for (const Term& t : f.terms()) {
    // A literal of t contradicts the stem when the stem fixes its variable the other way.
    if (t.pos_mask().intersects(stem.neg_mask()) || t.neg_mask().intersects(stem.pos_mask())) continue;
    kept.push_back(t.without_vars(sv));
  }
  return Dnf(f.n(), std::move(kept), f.pinned() | sv);
}

Assignment hybrid(const Assignment& z, const Assignment& y, const VarSet& r) {
  if (z.n() != y.n()) throw InputError("dimension mismatch in hybrid");
  Assignment out = y;
  for (int v = 1; v <= z.n(); ++v)
    if (r.test(v - 1)) out.set(v, z.get(v));
  return out;
}

bool is_valid_stem(const Term& stem, const Term& t, int slack) {
  if (slack < 0) throw ContractViolation("stem slack must be nonnegative");
  return stem.is_subset_of(t) && t.size() - stem.size() <= slack;
}

std::uint64_t to_lex_mask(const VarSet& s, int n) {
  if (n > 64) throw InputError("lexicographic masks need n <= 64");
  std::uint64_t m = 0;
  s.for_each_set([&](int b) {
    if (b < n) m |= std::uint64_t{1} << (n - 1 - b);
  });
  return m;
}

std::vector<std::uint64_t> truth_table(const Dnf& f) {
  const int n = f.n();
  if (n > 30) throw ConfigError("truth table needs n <= 30");
  const std::uint64_t points = std::uint64_t{1} << n;
  std::vector<std::uint64_t> table((points + 63) / 64, 0);
  const std::uint64_t all = points - 1;
  for (const Term& t : f.terms()) {
    const std::uint64_t fixed = to_lex_mask(t.pos_mask(), n);
    const std::uint64_t free = all & ~to_lex_mask(t.vars(), n);
    // Walk every submask of the free coordinates.
    std::uint64_t sub = 0;
    do {
      const std::uint64_t p = fixed | sub;
      table[p >> 6] |= std::uint64_t{1} << (p & 63);
      sub = (sub - free) & free;
    } while (sub != 0);
  }
  return table;
}

}  // namespace dnflearn
