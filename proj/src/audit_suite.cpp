#include "dnflearn/audit_suite.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dnflearn/aug_ptf.hpp"
#include "dnflearn/errors.hpp"
#include "dnflearn/features.hpp"
#include "dnflearn/generate.hpp"
#include "dnflearn/noise.hpp"
#include "dnflearn/profile.hpp"
#include "dnflearn/stem_finder.hpp"
#include "dnflearn/teacher.hpp"

namespace dnflearn {

namespace {

constexpr std::size_t kKeptFailures = 20;

int ceil_log2(int x) {
  int e = 0;
  while ((1 << e) < x) ++e;
  return e;
}

int ceil_sqrt(int x) {
  int r = 0;
  while (r * r < x) ++r;
  return r;
}

// A point satisfying term t, uniform elsewhere.
Assignment point_in(const Term& t, int n, Rng& rng) {
  Assignment y(n);
  for (int v = 1; v <= n; ++v) y.set(v, rng.bernoulli(0.5));
  t.vars().for_each_set([&](int b) { y.set(b + 1, t.pos_mask().test(b)); });
  return y;
}

// A random term over vars of y's literals (so y satisfies it).
Term term_through(const Assignment& y, int len, Rng& rng) {
  std::vector<int> vars(static_cast<std::size_t>(y.n()));
  for (int v = 1; v <= y.n(); ++v) vars[static_cast<std::size_t>(v - 1)] = v;
  rng.shuffle(vars);
  VarSet s;
  for (int i = 0; i < len; ++i) s.set(vars[static_cast<std::size_t>(i)] - 1);
  return term_from_point(y, s);
}

}  // namespace

void SuiteResult::fail(const std::string& anchor) {
  ++failed;
  if (failures.size() < kKeptFailures) failures.push_back(anchor);
}

std::string SuiteResult::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = name;
  j["pass"] = pass();
  j["checked"] = checked;
  j["failed"] = failed;
  j["failures"] = failures;
  return j.dump();
}

SuiteResult suite_chebyshev(const AuditConfig& cfg) {
  SuiteResult r;
  r.name = "chebyshev-coefficients";
  mpz_class three_d = 1;
  for (int d = 0; d <= cfg.max_cheb_degree; ++d, three_d *= 3) {
    const IntPoly c = cfg.chebyshev_gen(d);
    ++r.checked;
    if (c.degree() != d) r.fail("chebyshev degree d=" + std::to_string(d));
    if (c.abs_coeff_sum() > three_d) r.fail("coefficient sum d=" + std::to_string(d));
    if (c.eval(mpq_class(1)) != 1) r.fail("value at 1 d=" + std::to_string(d));
  }
  return r;
}

SuiteResult suite_conjunction_approx(const AuditConfig& cfg) {
  SuiteResult r;
  r.name = "conjunction-approximator";
  for (int k = cfg.approx_k_lo; k <= cfg.approx_k_hi; ++k) {
    const int two_k = 2 * k;
    const mpq_class bound(1, two_k);
    for (int m = 1; m <= two_k; ++m) {
      const ConjunctionApprox q(m, k);
      for (int s = 0; s <= two_k; ++s) {
        ++r.checked;
        const mpq_class& v = q.value(s);
        const bool ok = s == two_k ? v == 1 : abs(v) <= bound;
        if (!ok) {
          r.fail("approximator k=" + std::to_string(k) + " m=" + std::to_string(m) + " S=" + std::to_string(s));
        }
      }
    }
  }
  return r;
}

SuiteResult suite_aug_ptf(const AuditConfig& cfg) {
  SuiteResult r;
  r.name = "augmented-ptf";
  Rng rng(derive_seed(cfg.seed, 3));
  for (int inst = 0; inst < cfg.ptf_instances; ++inst) {
    const int k = 1 + inst % 4;
    const int n = 6 + rng.below(11);
    const int short_len = rng.range(1, std::min(n, 2 * k));
    const LengthProfile lp = inst % 3 == 0 ? LengthProfile::uniform(1, n)
                                           : LengthProfile::mixed(short_len, rng.range(short_len, n));
    const Dnf f = gen_random_dnf(n, k, lp, rng);
    const ScaleProfile profile = ScaleProfile::desk(k);

    FeatureCatalog catalog(default_d_max(k));
    // Decoy pairs first, so witnesses are not simply the lowest indices.
    const int decoys = rng.below(3);
    for (int d = 0; d < decoys; ++d) {
      const Term stem = random_term(n, rng.range(1, std::min(3, n)), rng);
      VarSet extra;
      for (int v = 1; v <= n; ++v)
        if (!stem.vars().test(v - 1) && rng.bernoulli(0.3)) extra.set(v - 1);
      if (catalog.find_stem(stem) < 0) catalog.add({stem, extra});
    }
    for (const Term& t : f.terms()) {
      // Drop up to 2k literals into R, plus a few unrelated auxiliary variables.
      std::vector<Literal> lits = t.literals();
      rng.shuffle(lits);
      const int drop = rng.range(0, std::min(static_cast<int>(lits.size()), 2 * k));
      Term stem;
      VarSet rest;
      for (std::size_t i = 0; i < lits.size(); ++i) {
        if (static_cast<int>(i) < drop) {
          rest.set(lits[i].var - 1);
        } else {
          stem.add(lits[i]);
        }
      }
      for (int v = 1; v <= n; ++v)
        if (!t.vars().test(v - 1) && rng.bernoulli(0.15)) rest.set(v - 1);
      const int j = catalog.find_stem(stem);
      if (j < 0) {
        catalog.add({stem, rest});
      } else {
        rest.for_each_set([&](int b) { catalog.add_to_r(j, b + 1); });
      }
    }

    const std::string anchor = "ptf instance " + std::to_string(inst) + " n=" + std::to_string(n) +
                               " k=" + std::to_string(k);
    ++r.checked;
    try {
      const AugPtf p = build_aug_ptf(f, catalog, profile);
      const int expect_degree = ceil_sqrt(2 * k) * ceil_log2(2 * k);
      if (p.degree != expect_degree) r.fail(anchor + " degree " + std::to_string(p.degree));
      for (const Feature& m : p.monomials) {
        if (!m.vars.is_subset_of(catalog.pair(m.pair).r)) {
          r.fail(anchor + " monomial outside R");
          break;
        }
      }
      if (!verify_ptf(f, p)) r.fail(anchor + " disagrees with the formula");
    } catch (const NotFullyExpressive& e) {
      r.fail(anchor + " " + e.what());
    }
  }
  return r;
}

SuiteResult suite_noise_oracles(const AuditConfig& cfg) {
  SuiteResult r;
  r.name = "noise-oracles";
  Rng rng(derive_seed(cfg.seed, 4));
  for (int inst = 0; inst < cfg.noise_instances; ++inst) {
    const int n = rng.range(1, 14);
    const int k = rng.range(1, 5);
    const Dnf f = gen_random_dnf(n, k, LengthProfile::uniform(0, n), rng);
    Assignment x(n);
    for (int v = 1; v <= n; ++v) x.set(v, rng.bernoulli(0.5));
    const double rho = rng.unit();
    const double a = noise_exact_ie(f, x, rho);
    const double b = noise_exact_enum(f, x, rho);
    ++r.checked;
    if (!(std::abs(a - b) <= 1e-12)) {
      r.fail("noise instance " + std::to_string(inst) + " rho=" + std::to_string(rho));
    }
  }
  return r;
}

SuiteResult suite_noise_claims(const AuditConfig& cfg) {
  SuiteResult r;
  r.name = "noise-claims";
  Rng rng(derive_seed(cfg.seed, 5));
  auto record = [&](const NoiseClaimsReport& rep, const std::string& anchor) {
    for (const ClaimCheck* c : {&rep.short_term, &rep.no_medium, &rep.irrelevant_flip}) {
      r.checked += c->checked;
      if (c->violations > 0) r.fail(anchor + " " + c->claim + " worst=" + std::to_string(c->worst));
    }
  };
  for (int inst = 0; inst < cfg.claim_instances; ++inst) {
    // Random formulas at desk and at custom profiles, exhaustive over n <= 12.
    const int k = 1 + inst % 3;
    const ScaleProfile profile =
        inst % 2 == 0 ? ScaleProfile::desk(k) : ScaleProfile::custom(k, rng.range(k, k + 2), rng.range(k + 2, k + 6));
    const int n = rng.range(4, 12);
    const Dnf f = gen_random_dnf(n, k, LengthProfile::uniform(1, n), rng);
    record(check_noise_claims(f, profile, derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(inst))),
           "claims instance " + std::to_string(inst) + " profile=" + profile.name);
  }
  // Constructed: one very long term next to short ones, with a cutoff large enough
  // that the no-medium bound drops below 0.1.
  for (int inst = 0; inst < 20; ++inst) {
    const int k = 1 + inst % 2;
    const ScaleProfile profile = k == 1 ? ScaleProfile::custom(1, 4, 150) : ScaleProfile::custom(2, 5, 200);
    const int long_len = profile.medium_cutoff + 10;
    const int n = long_len + 20;
    std::vector<int> lens{long_len};
    for (int i = 1; i < k; ++i) lens.push_back(rng.range(1, 3));
    const Dnf f = gen_random_dnf(n, k, LengthProfile::explicit_lengths(lens), rng);
    record(check_noise_claims(f, profile, derive_seed(cfg.seed, 200 + static_cast<std::uint64_t>(inst)), 12, 150),
           "constructed instance " + std::to_string(inst) + " n=" + std::to_string(n));
  }
  return r;
}

SuiteResult suite_walks(const AuditConfig& cfg) {
  SuiteResult r;
  r.name = "walk-invariants";
  Rng rng(derive_seed(cfg.seed, 6));
  int walks = 0;
  for (int inst = 0; walks < cfg.walk_target; ++inst) {
    const int k = rng.range(1, 5);
    const int n = rng.range(4, 20);
    const LengthProfile lp = inst % 2 == 0 ? LengthProfile::uniform(1, n)
                                           : LengthProfile::mixed(rng.range(1, std::min(n, 3)), rng.range(1, n));
    const Dnf f = gen_random_dnf(n, k, lp, rng);
    const ScaleProfile profile = ScaleProfile::desk(k);
    const Assignment y = point_in(f.term(rng.below(k)), n, rng);
    Teacher teacher(f);
    std::vector<WalkTrace> traces;
    find_candidate_stems(teacher, y, {10, derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(inst))}, &traces);
    for (std::size_t w = 0; w < traces.size(); ++w, ++walks) {
      const AuditReport rep = audit_walk(f, traces[w], profile);
      ++r.checked;
      for (const AuditViolation& v : rep.violations) {
        r.fail("walk instance " + std::to_string(inst) + " walk " + std::to_string(w) + " step " +
               std::to_string(v.step) + " " + v.lemma);
      }
    }
  }
  return r;
}

SuiteResult suite_stem_success(const AuditConfig& cfg, double* success_rate) {
  SuiteResult r;
  r.name = "stem-success";
  Rng rng(derive_seed(cfg.seed, 7));
  int successes = 0;
  for (int trial = 0; trial < cfg.stem_trials; ++trial) {
    const int k = 1 + trial % 4;
    const ScaleProfile profile = ScaleProfile::desk(k);
    const int n = std::min(profile.tau + 4, 20);
    Assignment y(n);
    for (int v = 1; v <= n; ++v) y.set(v, rng.bernoulli(0.5));
    // 1..k terms through y, all longer than tau; the rest miss y.
    const int through = rng.range(1, k);
    std::vector<Term> terms;
    for (int i = 0; i < through; ++i) terms.push_back(term_through(y, rng.range(profile.tau + 1, n), rng));
    while (static_cast<int>(terms.size()) < k) {
      const Term t = random_term(n, rng.range(1, n), rng);
      if (!t.eval(y)) terms.push_back(t);
    }
    const Dnf f(n, terms);
    Teacher teacher(f);
    const StemFinderConfig sc{StemFinderConfig::default_reps(k, n),
                              derive_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(trial))};
    const StemSearchResult found = find_candidate_stems(teacher, y, sc);

    bool valid = false;
    for (const EligiblePair& p : found.pairs) {
      ++r.checked;
      if (!p.stem.eval(y)) r.fail("stem trial " + std::to_string(trial) + " output not satisfied by y");
      if (p.r.any()) r.fail("stem trial " + std::to_string(trial) + " output with nonempty R");
      for (int i = 0; i < through && !valid; ++i)
        valid = is_valid_stem(p.stem, terms[static_cast<std::size_t>(i)], profile.stem_slack);
    }
    if (found.emitted > stem_output_cap(sc, n)) r.fail("stem trial " + std::to_string(trial) + " output cap");
    if (valid) ++successes;
  }
  const double rate = static_cast<double>(successes) / std::max(cfg.stem_trials, 1);
  if (success_rate != nullptr) *success_rate = rate;
  if (rate < 0.99) {
    r.fail("stem success rate " + std::to_string(successes) + "/" + std::to_string(cfg.stem_trials));
  }
  return r;
}

std::vector<SuiteResult> run_audit_suite(const AuditConfig& cfg) {
  return {suite_chebyshev(cfg),     suite_conjunction_approx(cfg), suite_aug_ptf(cfg),
          suite_noise_oracles(cfg), suite_noise_claims(cfg),      suite_walks(cfg),
          suite_stem_success(cfg)};
}

}  // namespace dnflearn
