#include "dnflearn/aug_ptf.hpp"

#include <map>
#include <memory>

#include <nlohmann/json.hpp>

#include "dnflearn/chebyshev.hpp"
#include "dnflearn/errors.hpp"

namespace dnflearn {

bool AugPtf::evaluate(const Assignment& x) const {
  mpz_class score = 0;
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    const Feature& m = monomials[i];
    if (stems[static_cast<std::size_t>(m.pair)].eval(x) && m.vars.is_subset_of(x.bits())) score += weights[i];
  }
  return score >= threshold;
}

std::string AugPtf::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["degree"] = degree;
  j["denominator"] = denominator.get_str();
  j["threshold"] = threshold.get_str();
  j["total_weight"] = total_weight.get_str();
  nlohmann::ordered_json stems_j = nlohmann::ordered_json::array();
  for (const Term& t : stems) {
    nlohmann::ordered_json lits = nlohmann::ordered_json::array();
    for (const Literal& l : t.literals()) lits.push_back(l.positive ? l.var : -l.var);
    stems_j.push_back(lits);
  }
  j["stems"] = stems_j;
  nlohmann::ordered_json mons = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    mons.push_back({{"stem", monomials[i].pair}, {"vars", var_list(monomials[i].vars)}, {"weight", weights[i].get_str()}});
  }
  j["monomials"] = mons;
  j["witness"] = witness;
  return j.dump();
}

AugPtf build_aug_ptf(const Dnf& f, const FeatureCatalog& catalog, const ScaleProfile& profile) {
  if (f.k() > profile.k) throw InputError("formula has more terms than the profile's k");
  const int slack = profile.stem_slack;

  AugPtf out;
  out.n = f.n();
  for (const EligiblePair& p : catalog.pairs()) out.stems.push_back(p.stem);

  std::map<int, std::unique_ptr<ConjunctionApprox>> approx;  // by conjunction length
  struct Key {
    int pair;
    VarSet vars;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, mpq_class> coeffs;
  mpz_class denom = 1;

  for (int i = 0; i < f.k(); ++i) {
    const Term& t = f.term(i);
    const auto w = find_witness(catalog, t, slack);
    if (!w) throw NotFullyExpressive(i, t.to_string());
    out.witness.push_back(*w);
    const Term b = t.minus(catalog.pair(*w).stem);
    const int m = b.size();
    auto& q = approx[m];
    if (!q) q = std::make_unique<ConjunctionApprox>(m, profile.k);

    const std::vector<int> vars = var_list(b.vars());
    const int num_pos = b.pos_mask().count();
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
      VarSet v;
      int a = 0;
      int c = 0;
      for (int s = 0; s < m; ++s) {
        if (!((mask >> s) & 1U)) continue;
        const int var = vars[static_cast<std::size_t>(s)];
        v.set(var - 1);
        (b.pos_mask().test(var - 1) ? a : c) += 1;
      }
      const mpq_class coef = q->monomial_coefficient(a, c, num_pos);
      if (coef == 0) continue;
      mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), coef.get_den_mpz_t());
      coeffs[{*w, v}] += coef;
    }
  }

  out.degree = approx.empty() ? ConjunctionApprox(0, profile.k).composed_degree()
                              : approx.begin()->second->composed_degree();
  out.denominator = denom;
  out.total_weight = 0;
  for (auto& [key, coef] : coeffs) {
    mpq_class scaled = coef * mpq_class(denom);
    scaled.canonicalize();
    if (scaled.get_den() != 1) throw ContractViolation("shared denominator failed to clear a coefficient");
    if (scaled == 0) continue;
    out.monomials.push_back({key.pair, key.vars});
    out.weights.push_back(scaled.get_num());
    out.total_weight += abs(scaled.get_num());
  }
  mpz_class three_d = 3 * denom;
  mpz_cdiv_q_ui(out.threshold.get_mpz_t(), three_d.get_mpz_t(), 4);
  return out;
}

bool verify_ptf(const Dnf& f, const AugPtf& p) {
  const int n = f.n();
  if (n != p.n) throw InputError("PTF dimension differs from the formula's");
  if (n > 24) throw ConfigError("exhaustive PTF verification needs n <= 24");

  // Per stem: a superset-sum table over the variables its monomials use, so each
  // point costs one lookup per stem.
  struct Group {
    std::uint64_t pos = 0, neg = 0;  // stem masks over x_i at bit i-1
    std::vector<int> vars;           // 0-based bits
    std::vector<mpz_class> table;
    std::vector<std::size_t> direct;  // monomial indices when the table is too wide
  };
  std::map<int, Group> groups;
  for (std::size_t i = 0; i < p.monomials.size(); ++i) {
    Group& g = groups[p.monomials[i].pair];
    g.direct.push_back(i);
  }
  for (auto& [pair, g] : groups) {
    const Term& stem = p.stems.at(static_cast<std::size_t>(pair));
    g.pos = stem.pos_mask().word(0);
    g.neg = stem.neg_mask().word(0);
    VarSet u;
    for (std::size_t i : g.direct) u |= p.monomials[i].vars;
    if (u.count() > 20) continue;
    u.for_each_set([&](int b) { g.vars.push_back(b); });
    const std::size_t width = g.vars.size();
    g.table.assign(std::size_t{1} << width, 0);
    for (std::size_t i : g.direct) {
      std::size_t local = 0;
      for (std::size_t t = 0; t < width; ++t)
        if (p.monomials[i].vars.test(g.vars[t])) local |= std::size_t{1} << t;
      g.table[local] += p.weights[i];
    }
    for (std::size_t t = 0; t < width; ++t)
      for (std::size_t m = 0; m < g.table.size(); ++m)
        if ((m >> t) & 1U) g.table[m] += g.table[m ^ (std::size_t{1} << t)];
    g.direct.clear();
  }

  struct Mask {
    std::uint64_t pos, neg;
  };
  std::vector<Mask> terms;
  for (const Term& t : f.terms()) terms.push_back({t.pos_mask().word(0), t.neg_mask().word(0)});

  mpz_class score;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
    bool fx = false;
    for (const Mask& t : terms) {
      if ((w & t.pos) == t.pos && (w & t.neg) == 0) {
        fx = true;
        break;
      }
    }
    score = 0;
    for (const auto& [pair, g] : groups) {
      if ((w & g.pos) != g.pos || (w & g.neg) != 0) continue;
      if (!g.table.empty()) {
        std::size_t local = 0;
        for (std::size_t t = 0; t < g.vars.size(); ++t)
          if ((w >> g.vars[t]) & 1U) local |= std::size_t{1} << t;
        score += g.table[local];
      } else {
        for (std::size_t i : g.direct) {
          const std::uint64_t mv = p.monomials[i].vars.word(0);
          if ((w & mv) == mv) score += p.weights[i];
        }
      }
    }
    if ((score >= p.threshold) != fx) return false;
  }
  return true;
}

}  // namespace dnflearn
