#include "dnflearn/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "dnflearn/errors.hpp"

namespace dnflearn {

namespace {

int ceil_log2(int x) {
  int e = 0;
  while ((1LL << e) < x) ++e;
  return e;
}

int ceil_sqrt(int x) {
  int r = 0;
  while (r * r < x) ++r;
  return r;
}

}  // namespace

int chebyshev_degree(int k) {
  if (k < 1) throw InputError("chebyshev_degree needs k >= 1");
  return ceil_sqrt(2 * k) * ceil_log2(2 * k);
}

int default_d_max(int k) { return std::min(chebyshev_degree(k), 2 * k); }

std::uint64_t binomial_prefix(int r, int dmax) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t c = 1;  // C(r, d)
  for (int d = 0; d <= std::min(r, dmax); ++d) {
    if (total > kMax - c) return kMax;
    total += c;
    // C(r, d+1) = C(r, d) * (r-d) / (d+1); exact since C(r,d)*(r-d) is divisible.
    const unsigned __int128 next = static_cast<unsigned __int128>(c) * static_cast<unsigned>(r - d) / static_cast<unsigned>(d + 1);
    c = next > kMax ? kMax : static_cast<std::uint64_t>(next);
  }
  return total;
}

FeatureCatalog::FeatureCatalog(int d_max) : d_max_(d_max) {
  if (d_max < 0) throw InputError("d_max must be nonnegative");
  pairs_.push_back({Term{}, VarSet{}});
}

int FeatureCatalog::add(const EligiblePair& p) {
  if (p.r.intersects(p.stem.vars())) throw InputError("auxiliary set meets the stem's variables");
  pairs_.push_back(p);
  ++snapshot_;
  return size() - 1;
}

int FeatureCatalog::find_stem(const Term& stem) const {
  for (int j = 0; j < size(); ++j)
    if (pairs_[static_cast<std::size_t>(j)].stem == stem) return j;
  return -1;
}

void FeatureCatalog::add_to_r(int j, int var) {
  EligiblePair& p = pairs_.at(static_cast<std::size_t>(j));
  if (p.stem.vars().test(var - 1)) throw InputError("auxiliary variable belongs to the stem");
  p.r.set(var - 1);
  ++snapshot_;
}

std::uint64_t FeatureCatalog::feature_count() const {
  std::uint64_t total = 0;
  for (const EligiblePair& p : pairs_) total += binomial_prefix(p.r.count(), d_max_);
  return total;
}

int FeatureCatalog::max_r() const {
  int m = 0;
  for (const EligiblePair& p : pairs_) m = std::max(m, p.r.count());
  return m;
}

std::vector<Feature> enumerate_features(const FeatureCatalog& catalog) {
  std::vector<Feature> out;
  for (int j = 0; j < catalog.size(); ++j) {
    const std::vector<int> r = var_list(catalog.pair(j).r);
    const int m = static_cast<int>(r.size());
    if (m > 30) throw ConfigError("auxiliary set too large to enumerate features");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      if (std::popcount(mask) > catalog.d_max()) continue;
      Feature f{j, {}};
      for (int t = 0; t < m; ++t)
        if ((mask >> t) & 1U) f.vars.set(r[static_cast<std::size_t>(t)] - 1);
      out.push_back(f);
    }
  }
  return out;
}

bool eval_feature(const FeatureCatalog& catalog, const Feature& feat, const Assignment& x) {
  return catalog.pair(feat.pair).stem.eval(x) && feat.vars.is_subset_of(x.bits());
}

std::optional<int> find_witness(const FeatureCatalog& catalog, const Term& t, int slack) {
  std::optional<int> best;
  int best_r = 0;
  for (int j = 0; j < catalog.size(); ++j) {
    const EligiblePair& p = catalog.pair(j);
    if (!is_valid_stem(p.stem, t, slack)) continue;
    if (!t.minus(p.stem).vars().is_subset_of(p.r)) continue;
    const int rs = p.r.count();
    if (!best || rs < best_r) {
      best = j;
      best_r = rs;
    }
  }
  return best;
}

bool is_fully_expressive(const FeatureCatalog& catalog, const Dnf& f, int slack) {
  for (const Term& t : f.terms())
    if (!find_witness(catalog, t, slack)) return false;
  return true;
}

}  // namespace dnflearn
