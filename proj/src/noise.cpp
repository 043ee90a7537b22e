#include "dnflearn/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dnflearn/errors.hpp"

namespace dnflearn {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InputError("noise rate must lie in [0, 1]");
}

void check_dims(const Dnf& f, const Assignment& x) {
  if (f.n() != x.n()) throw InputError("dimension mismatch between formula and point");
}

std::vector<long double> powers(long double base, int count) {
  std::vector<long double> p(static_cast<std::size_t>(count + 1), 1.0L);
  for (int i = 1; i <= count; ++i) p[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i - 1)] * base;
  return p;
}

}  // namespace

double noise_exact_enum(const Dnf& f, const Assignment& x, double rho) {
  check_dims(f, x);
  check_rho(rho);
  const std::vector<int> vars = var_list(f.support());
  const int m = static_cast<int>(vars.size());
  if (m > kEnumMaxVars) {
    throw ConfigError("exhaustive noise oracle limited to " + std::to_string(kEnumMaxVars) +
                      " free coordinates, formula mentions " + std::to_string(m));
  }
  // Re-index the mentioned variables to local bits 0..m-1.
  auto local = [&](const BitVec& mask) {
    std::uint32_t out = 0;
    for (int t = 0; t < m; ++t)
      if (mask.test(vars[static_cast<std::size_t>(t)] - 1)) out |= 1U << t;
    return out;
  };
  struct LocalTerm {
    std::uint32_t pos, neg;
  };
  std::vector<LocalTerm> terms;
  for (const Term& t : f.terms()) terms.push_back({local(t.pos_mask()), local(t.neg_mask())});
  const std::uint32_t xl = local(x.bits());

  // count[c] = number of flip patterns with c flips under which f is true.
  std::vector<std::uint64_t> count(static_cast<std::size_t>(m + 1), 0);
  const std::uint64_t patterns = std::uint64_t{1} << m;
  for (std::uint64_t flip = 0; flip < patterns; ++flip) {
    const std::uint32_t yl = xl ^ static_cast<std::uint32_t>(flip);
    for (const LocalTerm& t : terms) {
      if ((yl & t.pos) == t.pos && (yl & t.neg) == 0) {
        ++count[static_cast<std::size_t>(std::popcount(flip))];
        break;
      }
    }
  }
  const auto keep = powers(rho, m);
  const auto move = powers(1.0L - rho, m);
  long double total = 0.0L;
  for (int c = 0; c <= m; ++c) {
    total += static_cast<long double>(count[static_cast<std::size_t>(c)]) * keep[static_cast<std::size_t>(m - c)] *
             move[static_cast<std::size_t>(c)];
  }
  return static_cast<double>(total);
}

double noise_exact_ie(const Dnf& f, const Assignment& x, double rho) {
  check_dims(f, x);
  check_rho(rho);
  const int k = f.k();
  if (k > kIeMaxTerms) {
    throw ConfigError("inclusion-exclusion noise oracle limited to " + std::to_string(kIeMaxTerms) + " terms");
  }
  const auto keep = powers(rho, f.n());
  const auto move = powers(1.0L - rho, f.n());
  const BitVec& xb = x.bits();
  long double total = 0.0L;

  // Depth-first over subsets, carrying the union of the chosen terms.
  struct Frame {
    int next;
    int size;
    BitVec pos, neg;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, {}, {}});
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    for (int i = fr.next; i < k; ++i) {
      const Term& t = f.term(i);
      BitVec pos = fr.pos | t.pos_mask();
      BitVec neg = fr.neg | t.neg_mask();
      if (pos.intersects(neg)) continue;  // contradictory union: joint probability 0, and so for every superset
      const int agree = (pos & xb).count() + neg.minus(xb).count();
      const int disagree = pos.count() + neg.count() - agree;
      const long double joint = keep[static_cast<std::size_t>(agree)] * move[static_cast<std::size_t>(disagree)];
      total += ((fr.size + 1) % 2 == 1) ? joint : -joint;
      stack.push_back({i + 1, fr.size + 1, pos, neg});
    }
  }
  return static_cast<double>(total);
}

double noise_sampled(const std::function<bool(const Assignment&)>& mq, const Assignment& x, double rho,
                     std::uint64_t samples, Rng& rng, const VarSet& pinned) {
  check_rho(rho);
  if (samples < 1) throw InputError("sampled noise estimate needs at least one sample");
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    Assignment y = x;
    for (int v = 1; v <= x.n(); ++v) {
      if (pinned.test(v - 1)) continue;
      if (!rng.bernoulli(rho)) y.flip(v);
    }
    if (mq(y)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

std::uint64_t hoeffding_samples(double gap, double kappa) {
  if (!(gap > 0.0) || !(kappa > 0.0 && kappa < 1.0)) throw ConfigError("hoeffding_samples needs gap > 0 and kappa in (0,1)");
  return static_cast<std::uint64_t>(std::ceil(8.0 * std::log(2.0 / kappa) / (gap * gap)));
}

const char* noise_mode_name(NoiseMode m) {
  switch (m) {
    case NoiseMode::kExactEnum:
      return "enum";
    case NoiseMode::kExactIe:
      return "ie";
    case NoiseMode::kSampled:
      return "sampled";
  }
  return "?";
}

NoiseMode parse_noise_mode(const std::string& s) {
  if (s == "enum") return NoiseMode::kExactEnum;
  if (s == "ie") return NoiseMode::kExactIe;
  if (s == "sampled") return NoiseMode::kSampled;
  throw ConfigError("unknown noise oracle '" + s + "' (expected enum, ie or sampled)");
}

double noised_restricted_value(Teacher& teacher, const Term& stem, const Assignment& x, double rho,
                               const NoiseOracle& oracle, std::uint64_t eval_index) {
  switch (oracle.mode) {
    case NoiseMode::kExactEnum:
    case NoiseMode::kExactIe: {
      const Dnf g = restrict(teacher.white_box_target(), stem);
      teacher.count_exact_noise_eval();
      return oracle.mode == NoiseMode::kExactEnum ? noise_exact_enum(g, x, rho) : noise_exact_ie(g, x, rho);
    }
    case NoiseMode::kSampled: {
      if (oracle.samples < 1) throw ConfigError("sampled noise oracle needs samples >= 1");
      PhaseScope scope(teacher, Phase::kNoise);
      Rng rng(derive_seed(oracle.seed, eval_index));
      return noise_sampled([&](const Assignment& a) { return teacher.mq(a); }, x, rho, oracle.samples, rng,
                           stem.vars());
    }
  }
  return 0.0;
}

FrvOutcome find_relevant_variable(Teacher& teacher, const Term& stem, const VarSet& r, const Assignment& y,
                                  const Assignment& z, const ScaleProfile& profile, const NoiseOracle& oracle,
                                  std::uint64_t call_index, const FrvOptions& options) {
  const Dnf& f = teacher.white_box_target();
  if (y.n() != f.n() || z.n() != f.n()) throw InputError("dimension mismatch in relevant-variable search");
  if (!eval_dnf(f, y)) throw ContractViolation("relevant-variable search needs f(y) = 1");
  if (eval_dnf(f, z)) throw ContractViolation("relevant-variable search needs f(z) = 0");
  if (!stem.eval(y) || !stem.eval(z)) throw ContractViolation("both endpoints must satisfy the stem");
  if (r.intersects(stem.vars())) throw ContractViolation("auxiliary set meets the stem");

  const Assignment target_point = hybrid(z, y, r);
  const std::vector<int> diff = var_list(z.bits() ^ target_point.bits());
  const int m = static_cast<int>(diff.size());
  if (m == 0) return FrvFail{0};

  const std::uint64_t base = call_index * static_cast<std::uint64_t>(f.n() + 2);
  auto value = [&](const Assignment& a, int t) {
    return noised_restricted_value(teacher, stem, a, profile.rho, oracle, base + static_cast<std::uint64_t>(t));
  };
  auto point_at = [&](int t) {
    Assignment a = z;
    for (int s = 0; s < t; ++s) a.flip(diff[static_cast<std::size_t>(s)]);
    return a;
  };

  if (options.bisection) {
    // Keep v(hi) - v(lo) >= gap * (hi - lo); one half always inherits it.
    int lo = 0;
    int hi = m;
    double vlo = value(z, 0);
    double vhi = value(target_point, m);
    if (vhi - vlo >= profile.gap * m) {
      while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        const double vmid = value(point_at(mid), mid);
        if (vmid - vlo >= profile.gap * (mid - lo)) {
          hi = mid;
          vhi = vmid;
        } else {
          lo = mid;
          vlo = vmid;
        }
      }
      return FrvUpdated{diff[static_cast<std::size_t>(lo)], point_at(lo), vlo, vhi};
    }
  }

  Assignment a = z;
  double prev = value(a, 0);
  for (int t = 0; t < m; ++t) {
    Assignment next = a.flipped(diff[static_cast<std::size_t>(t)]);
    const double v = value(next, t + 1);
    if (v >= prev + profile.gap) return FrvUpdated{diff[static_cast<std::size_t>(t)], a, prev, v};
    a = next;
    prev = v;
  }
  return FrvFail{m};
}

VarSet morally_relevant(const Dnf& g, const ScaleProfile& profile) {
  VarSet out;
  for (const Term& t : g.terms())
    if (t.size() <= profile.medium_cutoff) out |= t.vars();
  return out;
}

double no_medium_bound(const ScaleProfile& p) {
  return 0.01 + p.k * std::pow(p.rho, p.medium_cutoff) + (1.0 - std::pow(p.rho, p.k));
}

double irrelevant_flip_bound(const ScaleProfile& p) { return 2.0 * p.k * std::pow(p.rho, p.medium_cutoff); }

std::string NoiseClaimsReport::to_json() const {
  auto one = [](const ClaimCheck& c) {
    nlohmann::ordered_json j;
    j["claim"] = c.claim;
    j["pass"] = c.pass;
    j["bound"] = c.bound;
    j["checked"] = c.checked;
    j["violations"] = c.violations;
    j["worst"] = c.worst;
    j["witness"] = c.witness;
    return j;
  };
  nlohmann::ordered_json j;
  j["pass"] = pass();
  j["claims"] = {one(short_term), one(no_medium), one(irrelevant_flip)};
  return j.dump();
}

NoiseClaimsReport check_noise_claims(const Dnf& f, const ScaleProfile& profile, std::uint64_t seed, int exhaustive_n,
                                     int samples) {
  const int n = f.n();
  auto exact = [&](const Assignment& x) {
    return f.k() <= kIeMaxTerms ? noise_exact_ie(f, x, profile.rho) : noise_exact_enum(f, x, profile.rho);
  };
  const auto [shorts, rest] = split_by_length(f, profile.tau);
  const auto [not_long, longs] = split_by_length(f, profile.medium_cutoff);
  (void)rest;
  (void)longs;
  const VarSet relevant = morally_relevant(f, profile);
  const VarSet irrelevant = BitVec::low_mask(n).minus(relevant).minus(f.pinned());

  NoiseClaimsReport rep;
  rep.short_term = {"short-term", true, 0.9, 0, 0, 1.0, ""};
  rep.no_medium = {"no-short-or-medium", true, no_medium_bound(profile), 0, 0, 0.0, ""};
  rep.irrelevant_flip = {"irrelevant-flip", true, irrelevant_flip_bound(profile), 0, 0, 0.0, ""};

  auto check_point = [&](const Assignment& y, Rng& rng) {
    if (shorts.k() > 0 && eval_dnf(shorts, y)) {
      const double v = exact(y);
      ++rep.short_term.checked;
      if (v < 0.9) ++rep.short_term.violations;
      if (v < rep.short_term.worst) {
        rep.short_term.worst = v;
        rep.short_term.witness = y.to_string();
      }
    }
    if (!eval_dnf(not_long, y)) {
      const double v = exact(y);
      ++rep.no_medium.checked;
      if (v > rep.no_medium.bound) ++rep.no_medium.violations;
      if (v > rep.no_medium.worst) {
        rep.no_medium.worst = v;
        rep.no_medium.witness = y.to_string();
      }
    }
    if (irrelevant.any()) {
      // The whole irrelevant set, then one random nonempty subset of it.
      std::vector<VarSet> flips{irrelevant};
      VarSet sub;
      while (sub.none()) {
        irrelevant.for_each_set([&](int b) {
          if (rng.bernoulli(0.5)) sub.set(b);
        });
      }
      flips.push_back(sub);
      const double base = exact(y);
      for (const VarSet& s : flips) {
        Assignment ys = y;
        s.for_each_set([&](int b) { ys.flip(b + 1); });
        const double d = std::abs(base - exact(ys));
        ++rep.irrelevant_flip.checked;
        if (d > rep.irrelevant_flip.bound) ++rep.irrelevant_flip.violations;
        if (d > rep.irrelevant_flip.worst) {
          rep.irrelevant_flip.worst = d;
          rep.irrelevant_flip.witness = y.to_string() + "^" + var_set_string(s);
        }
      }
    }
  };

  Rng rng(seed);
  if (n <= exhaustive_n) {
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) check_point(Assignment::from_lex_index(n, p), rng);
  } else {
    for (int s = 0; s < samples; ++s) {
      Assignment y(n);
      for (int v = 1; v <= n; ++v) y.set(v, rng.bernoulli(0.5));
      check_point(y, rng);
      if (shorts.k() > 0) {
        // Force a short term true so the short-term claim is exercised too.
        const Term& t = shorts.term(rng.below(shorts.k()));
        Assignment ys = y;
        t.vars().for_each_set([&](int b) { ys.set(b + 1, t.pos_mask().test(b)); });
        check_point(ys, rng);
      }
    }
  }
  rep.short_term.pass = rep.short_term.violations == 0;
  rep.no_medium.pass = rep.no_medium.violations == 0;
  rep.irrelevant_flip.pass = rep.irrelevant_flip.violations == 0;
  return rep;
}

}  // namespace dnflearn
