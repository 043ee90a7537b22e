#include "dnflearn/winnow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

#include <nlohmann/json.hpp>

#include "dnflearn/errors.hpp"

namespace dnflearn {

namespace {

inline std::uint64_t extract_bits(std::uint64_t value, std::uint64_t mask) {
#if defined(__BMI2__)
  return _pext_u64(value, mask);
#else
  std::uint64_t out = 0;
  int t = 0;
  while (mask != 0) {
    const std::uint64_t low = mask & (~mask + 1);
    if (value & low) out |= std::uint64_t{1} << t;
    ++t;
    mask ^= low;
  }
  return out;
#endif
}

Score round_fixed(long double v) {
  const long double scaled = std::ldexp(v, WeightScale::kFracBits);
  const long double r = std::nearbyint(scaled);
  if (std::fabs(r) > 0x1.0p+120L) throw ContractViolation("winnow weight outside the fixed-point range");
  // Split to avoid relying on a long double -> __int128 conversion of huge values.
  const bool negative = r < 0;
  long double mag = std::fabs(r);
  const long double hi = std::floor(mag / 0x1.0p+64L);
  const long double lo = mag - hi * 0x1.0p+64L;
  Score s = (static_cast<Score>(static_cast<std::uint64_t>(hi)) << 64) + static_cast<Score>(static_cast<std::uint64_t>(lo));
  return negative ? -s : s;
}

}  // namespace

WeightScale::WeightScale(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0)) throw ConfigError("winnow promotion factor must exceed 1");
  table_.reserve(2 * kMaxExponent + 1);
  for (int e = -kMaxExponent; e <= kMaxExponent; ++e) {
    if (alpha == 2.0) {
      // Exact powers of two: 2^(F+e) - 2^(F-e), dropping the part below 2^-F.
      Score up = e + kFracBits >= 0 ? (Score{1} << (e + kFracBits)) : 0;
      Score down = kFracBits - e >= 0 ? (Score{1} << (kFracBits - e)) : 0;
      table_.push_back(up - down);
    } else {
      const long double a = alpha;
      table_.push_back(round_fixed(std::pow(a, e) - std::pow(a, -e)));
    }
  }
}

Score WeightScale::fixed(double v) const { return round_fixed(v); }

std::string score_string(Score s) {
  if (s == 0) return "0";
  const bool negative = s < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(s + 1)) + 1 : static_cast<unsigned __int128>(s);
  std::string out;
  while (mag > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- WinnowCore

WinnowCore::WinnowCore(std::size_t num_features, double alpha, double theta)
    : scale_(alpha), theta_(theta > 0 ? theta : static_cast<double>(num_features)), exps_(num_features, 0) {
  if (num_features == 0) throw ConfigError("winnow needs at least one feature");
  theta_fixed_ = scale_.fixed(theta_);
}

double WinnowCore::w_pos(std::size_t j) const { return std::pow(scale_.alpha(), exps_[j]); }
double WinnowCore::w_neg(std::size_t j) const { return std::pow(scale_.alpha(), -exps_[j]); }

Score WinnowCore::score(std::span<const std::uint32_t> active) const {
  Score s = 0;
  for (std::uint32_t j : active) s += scale_.net(exps_[j]);
  return s;
}

void WinnowCore::update(std::span<const std::uint32_t> active, bool label) {
  if (predict(active) == label) throw ContractViolation("winnow update on a correctly classified example");
  const int step = label ? 1 : -1;
  for (std::uint32_t j : active) exps_[j] = WeightScale::clamp(exps_[j] + step);
  ++mistakes_;
}

SparseRunResult winnow_run_sparse(WinnowCore& w,
                                  const std::function<std::optional<SparseExample>(const WinnowCore&)>& eq,
                                  std::uint64_t cap) {
  if (cap < 1) throw ConfigError("mistake cap must be at least 1");
  SparseRunResult r;
  while (true) {
    auto cex = eq(w);
    if (!cex) {
      r.learned = true;
      return r;
    }
    w.update(cex->active, cex->label);
    ++r.mistakes;
    if (r.mistakes > cap) return r;
  }
}

// ------------------------------------------------------------- CatalogWinnow

CatalogWinnow::CatalogWinnow(const FeatureCatalog& catalog, int n, double alpha, double theta, int max_dense_r)
    : n_(n),
      d_max_(catalog.d_max()),
      scale_(alpha),
      snapshot_(catalog.snapshot_id()),
      feature_count_(catalog.feature_count()) {
  theta_ = theta > 0 ? theta : static_cast<double>(feature_count_);
  theta_fixed_ = scale_.fixed(theta_);
  const bool lex = n <= 64;
  for (const EligiblePair& p : catalog.pairs()) {
    const int r = p.r.count();
    if (r > max_dense_r) {
      throw ConfigError("auxiliary set of size " + std::to_string(r) + " exceeds the dense limit " +
                        std::to_string(max_dense_r));
    }
    PairState s;
    s.stem = p.stem;
    if (lex) {
      s.stem_pos_lex = to_lex_mask(p.stem.pos_mask(), n);
      s.stem_neg_lex = to_lex_mask(p.stem.neg_mask(), n);
      s.r_lex = to_lex_mask(p.r, n);
    }
    std::vector<int> vars = var_list(p.r);
    std::reverse(vars.begin(), vars.end());
    s.vars_desc = std::move(vars);
    s.exps.assign(std::size_t{1} << r, 0);
    s.table.assign(std::size_t{1} << r, 0);
    pairs_.push_back(std::move(s));
  }
}

std::uint32_t CatalogWinnow::local_index(const PairState& p, const Assignment& x) const {
  std::uint32_t m = 0;
  for (std::size_t t = 0; t < p.vars_desc.size(); ++t)
    if (x.get(p.vars_desc[t])) m |= 1U << t;
  return m;
}

Score CatalogWinnow::score(const Assignment& x) const {
  Score s = 0;
  for (const PairState& p : pairs_) {
    if (!p.stem.eval(x)) continue;
    s += p.table[local_index(p, x)];
  }
  return s;
}

bool CatalogWinnow::predict_lex(std::uint64_t index) const {
  Score s = 0;
  for (const PairState& p : pairs_) {
    if ((index & p.stem_pos_lex) != p.stem_pos_lex || (index & p.stem_neg_lex) != 0) continue;
    s += p.table[extract_bits(index, p.r_lex)];
  }
  return s >= theta_fixed_;
}

Score CatalogWinnow::score_direct(const Assignment& x) const {
  Score s = 0;
  for (const PairState& p : pairs_) {
    if (!p.stem.eval(x)) continue;
    const std::uint32_t m = local_index(p, x);
    // Every subset of the active local mask with degree <= d_max is an active feature.
    std::uint32_t sub = 0;
    do {
      if (std::popcount(sub) <= d_max_) s += scale_.net(p.exps[sub]);
      sub = (sub - m) & m;
    } while (sub != 0);
  }
  return s;
}

void CatalogWinnow::update(const Assignment& x, bool label) {
  if (predict(x) == label) throw ContractViolation("winnow update on a correctly classified point");
  const int step = label ? 1 : -1;
  for (PairState& p : pairs_) {
    if (!p.stem.eval(x)) continue;
    const std::uint32_t m = local_index(p, x);
    const int width = std::popcount(m);
    // delta[c]: change of the net weight of the c-th subset of m (compressed order).
    std::vector<Score> delta(std::size_t{1} << width, 0);
    std::uint32_t sub = 0;
    std::size_t c = 0;
    do {
      if (std::popcount(sub) <= d_max_) {
        const int old = p.exps[sub];
        const int now = WeightScale::clamp(old + step);
        p.exps[sub] = static_cast<std::int8_t>(now);
        delta[c] = scale_.net(now) - scale_.net(old);
      }
      sub = (sub - m) & m;
      ++c;
    } while (sub != 0);
    // Subset sums inside the compressed cube of m.
    for (int t = 0; t < width; ++t)
      for (std::size_t i = 0; i < delta.size(); ++i)
        if ((i >> t) & 1U) delta[i] += delta[i ^ (std::size_t{1} << t)];
    // table[a | b] += delta[a] for a within m and b outside it.
    const std::uint32_t full = static_cast<std::uint32_t>(p.table.size() - 1);
    const std::uint32_t rest = full & ~m;
    std::uint32_t b = 0;
    do {
      std::uint32_t a = 0;
      std::size_t ci = 0;
      do {
        p.table[a | b] += delta[ci];
        a = (a - m) & m;
        ++ci;
      } while (a != 0);
      b = (b - rest) & rest;
    } while (b != 0);
  }
  ++mistakes_;
}

int CatalogWinnow::exponent(int pair, const VarSet& vars) const {
  const PairState& p = pairs_.at(static_cast<std::size_t>(pair));
  std::uint32_t m = 0;
  VarSet left = vars;
  for (std::size_t t = 0; t < p.vars_desc.size(); ++t) {
    if (vars.test(p.vars_desc[t] - 1)) {
      m |= 1U << t;
      left.reset(p.vars_desc[t] - 1);
    }
  }
  if (left.any()) throw InputError("feature variables outside the pair's auxiliary set");
  return p.exps[m];
}

std::string CatalogWinnowHypothesis::id() const {
  return "winnow@" + std::to_string(w_.snapshot_id()) + "/" + std::to_string(w_.mistakes());
}

const char* winnow_exit_name(WinnowExitKind k) {
  switch (k) {
    case WinnowExitKind::kLearned:
      return "learned";
    case WinnowExitKind::kCapExceeded:
      return "cap_exceeded";
    case WinnowExitKind::kAborted:
      return "aborted";
  }
  return "?";
}

std::string WinnowExit::to_json(std::uint64_t cap, std::uint64_t snapshot, std::uint64_t features) const {
  nlohmann::ordered_json j;
  j["mistakes"] = mistakes;
  j["cap"] = cap;
  j["exit"] = winnow_exit_name(kind);
  j["snapshot"] = snapshot;
  j["features"] = features;
  j["positives"] = pos.size();
  return j.dump();
}

WinnowExit winnow_run(Teacher& teacher, CatalogWinnow& w, std::uint64_t cap, const WinnowHooks& hooks) {
  if (cap < 1) throw ConfigError("mistake cap must be at least 1");
  WinnowExit out;
  CatalogWinnowHypothesis h(w);
  while (true) {
    EqResult r;
    {
      PhaseScope scope(teacher, Phase::kWinnow);
      r = teacher.eq(h);
    }
    if (r.correct) {
      out.kind = WinnowExitKind::kLearned;
      return out;
    }
    ++out.mistakes;
    if (r.label) {
      out.pos.push_back(r.counterexample);
      if (hooks.on_positive) hooks.on_positive(r.counterexample);
    } else if (hooks.on_negative && hooks.on_negative(r.counterexample)) {
      out.kind = WinnowExitKind::kAborted;
      return out;
    }
    if (out.mistakes > cap) {
      out.kind = WinnowExitKind::kCapExceeded;
      return out;
    }
    w.update(r.counterexample, r.label);
  }
}

}  // namespace dnflearn
