#include <cmath>
#include <variant>

#include <gtest/gtest.h>

#include "dnflearn/errors.hpp"
#include "dnflearn/generate.hpp"
#include "dnflearn/noise.hpp"

using namespace dnflearn;

namespace {

Assignment A(const char* bits) { return Assignment::from_string(bits); }

Assignment random_point(int n, Rng& rng) {
  Assignment x(n);
  for (int i = 1; i <= n; ++i) x.set(i, rng.bernoulli(0.5));
  return x;
}

// Direct sum over all 2^n noise patterns, written independently of the library.
double brute_noise(const Dnf& f, const Assignment& x, double rho) {
  const int n = f.n();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Assignment y = x;
    double p = 1.0;
    for (int i = 1; i <= n; ++i) {
      if ((mask >> (i - 1)) & 1U) {
        y.flip(i);
        p *= 1.0 - rho;
      } else {
        p *= rho;
      }
    }
    if (eval_dnf(f, y)) total += p;
  }
  return total;
}

}  // namespace

TEST(NoiseExact, ConstantOne) {
  const Dnf one(5, {Term{}});
  for (double rho : {0.0, 0.3, 0.975, 1.0}) {
    EXPECT_DOUBLE_EQ(noise_exact_enum(one, A("01101"), rho), 1.0);
    EXPECT_DOUBLE_EQ(noise_exact_ie(one, A("01101"), rho), 1.0);
  }
}

TEST(NoiseExact, IdentityNoise) {
  Rng rng(2);
  const Dnf f = gen_random_dnf(8, 3, LengthProfile::uniform(1, 4), rng);
  for (int i = 0; i < 20; ++i) {
    const Assignment x = random_point(8, rng);
    const double v = eval_dnf(f, x) ? 1.0 : 0.0;
    EXPECT_DOUBLE_EQ(noise_exact_enum(f, x, 1.0), v);
    EXPECT_DOUBLE_EQ(noise_exact_ie(f, x, 1.0), v);
  }
}

TEST(NoiseExact, SingleTerm) {
  const Dnf f(6, {Term{pos(1), neg(2), pos(4), pos(6)}});
  EXPECT_NEAR(noise_exact_ie(f, A("101101"), 0.9), std::pow(0.9, 4), 1e-15);
  EXPECT_NEAR(noise_exact_enum(f, A("101101"), 0.9), std::pow(0.9, 4), 1e-15);
}

TEST(NoiseExact, ContradictoryUnion) {
  // x1 | ~x1 is constant 1; the joint term contributes nothing.
  const Dnf f(3, {Term{pos(1)}, Term{neg(1)}});
  EXPECT_NEAR(noise_exact_ie(f, A("010"), 0.7), 1.0, 1e-15);
}

TEST(NoiseExact, OraclesAgreeWithBruteForce) {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + trial % 8;
    const Dnf f = gen_random_dnf(n, 1 + trial % 5, LengthProfile::uniform(1, std::min(n, 5)), rng);
    const Assignment x = random_point(n, rng);
    const double rho = 0.5 + 0.5 * rng.unit();
    const double ref = brute_noise(f, x, rho);
    EXPECT_NEAR(noise_exact_enum(f, x, rho), ref, 1e-12);
    EXPECT_NEAR(noise_exact_ie(f, x, rho), ref, 1e-12);
  }
}

TEST(NoiseExact, PinnedCoordinatesStayFixed) {
  const Dnf f(3, {Term{pos(1), pos(2)}});
  const Dnf r = restrict(f, Term{pos(1)});
  EXPECT_NEAR(noise_exact_ie(r, A("110"), 0.8), 0.8, 1e-15);
  EXPECT_NEAR(noise_exact_enum(r, A("110"), 0.8), 0.8, 1e-15);
}

TEST(NoiseSampled, Limits) {
  Rng rng(1);
  auto one = [](const Assignment&) { return true; };
  EXPECT_DOUBLE_EQ(noise_sampled(one, A("0101"), 0.6, 10, rng), 1.0);
  const Dnf f(4, {Term{pos(1), pos(3)}});
  auto mq = [&](const Assignment& y) { return eval_dnf(f, y); };
  EXPECT_DOUBLE_EQ(noise_sampled(mq, A("1010"), 1.0, 1, rng), 1.0);
  EXPECT_DOUBLE_EQ(noise_sampled(mq, A("0010"), 1.0, 7, rng), 0.0);
}

TEST(NoiseSampled, HoeffdingCalibration) {
  const Dnf f(6, {Term{pos(1), pos(2)}, Term{neg(3), pos(5), pos(6)}});
  const Assignment x = A("110011");
  const double rho = 0.8;
  const double exact = noise_exact_enum(f, x, rho);
  const double delta = 0.05;
  const std::uint64_t samples = 200;
  const double tol = 3.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * samples));
  auto mq = [&](const Assignment& y) { return eval_dnf(f, y); };
  Rng rng(123);
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    if (std::fabs(noise_sampled(mq, x, rho, samples, rng) - exact) > tol) ++failures;
  }
  EXPECT_LE(failures, static_cast<int>(delta * 1000));
}

TEST(NoiseSampled, HoeffdingSamples) {
  EXPECT_EQ(hoeffding_samples(0.5, 0.01), static_cast<std::uint64_t>(std::ceil(8 * std::log(200.0) / 0.25)));
  EXPECT_THROW(hoeffding_samples(0.0, 0.1), ConfigError);
}

TEST(NoiseClaims, ShortTermAtTau) {
  const ScaleProfile p = ScaleProfile::desk(1);
  const Dnf f(8, {Term{pos(1), pos(2), neg(3), pos(4)}});
  ASSERT_EQ(f.term(0).size(), p.tau);
  EXPECT_GE(noise_exact_ie(f, A("11010000"), p.rho), 0.9);
  EXPECT_TRUE(check_noise_claims(f, p).short_term.pass);
}

TEST(NoiseClaims, LongTermBelowBound) {
  // No-medium bound below 0.1 needs rho^cutoff small, so the long term has more than
  // 150 literals; the inclusion-exclusion oracle handles that size.
  const ScaleProfile p = ScaleProfile::custom(1, 4, 150);
  ASSERT_LT(no_medium_bound(p), 0.1);
  const int len = p.medium_cutoff + 1;
  std::vector<Literal> lits;
  for (int i = 1; i <= len; ++i) lits.push_back(pos(i));
  const Dnf f(len + 9, {Term(lits)});
  const Assignment y(len + 9);
  EXPECT_LT(noise_exact_ie(f, y, p.rho), no_medium_bound(p));
  const NoiseClaimsReport rep = check_noise_claims(f, p, 5, 12, 300);
  EXPECT_TRUE(rep.pass()) << rep.to_json();
}

TEST(NoiseClaims, Bounds) {
  const ScaleProfile p = ScaleProfile::desk(2);
  EXPECT_NEAR(no_medium_bound(p), 0.01 + 2 * std::pow(p.rho, p.medium_cutoff) + 1 - p.rho * p.rho, 1e-15);
  EXPECT_NEAR(irrelevant_flip_bound(p), 4 * std::pow(p.rho, p.medium_cutoff), 1e-15);
}

TEST(RelevantVariable, FindsFlip) {
  const Dnf f(3, {Term{pos(1), pos(2)}});
  Teacher t(f);
  const FrvOutcome r = find_relevant_variable(t, Term{}, VarSet{}, A("110"), A("010"), ScaleProfile::desk(1),
                                              NoiseOracle::exact_ie());
  ASSERT_TRUE(std::holds_alternative<FrvUpdated>(r));
  EXPECT_EQ(std::get<FrvUpdated>(r).var, 1);
  EXPECT_GE(std::get<FrvUpdated>(r).high - std::get<FrvUpdated>(r).low, ScaleProfile::desk(1).gap);
}

TEST(RelevantVariable, EmptyWalkFails) {
  const Dnf f(3, {Term{pos(1), pos(2)}});
  Teacher t(f);
  const FrvOutcome r = find_relevant_variable(t, Term{}, var_set({1, 3}), A("111"), A("010"), ScaleProfile::desk(1),
                                              NoiseOracle::exact_ie());
  ASSERT_TRUE(std::holds_alternative<FrvFail>(r));
  EXPECT_EQ(std::get<FrvFail>(r).walk_length, 0);
}

TEST(RelevantVariable, Preconditions) {
  const Dnf f(3, {Term{pos(1), pos(2)}});
  Teacher t(f);
  const ScaleProfile p = ScaleProfile::desk(1);
  EXPECT_THROW(find_relevant_variable(t, Term{}, {}, A("010"), A("000"), p, NoiseOracle::exact_ie()),
               ContractViolation);
  EXPECT_THROW(find_relevant_variable(t, Term{}, {}, A("110"), A("111"), p, NoiseOracle::exact_ie()),
               ContractViolation);
  EXPECT_EQ(t.stats().mq_count, 0U);
}

TEST(RelevantVariable, BisectionAgreesWithScan) {
  Rng rng(44);
  int updated = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Dnf f = gen_random_dnf(10, 2, LengthProfile::uniform(1, 4), rng);
    Assignment y(10), z(10);
    for (const Literal& l : f.term(0).literals()) y.set(l.var, l.positive);
    z = random_point(10, rng);
    if (!eval_dnf(f, y) || eval_dnf(f, z)) continue;
    Teacher a(f), b(f);
    const ScaleProfile p = ScaleProfile::desk(2);
    const FrvOutcome ra = find_relevant_variable(a, Term{}, {}, y, z, p, NoiseOracle::exact_ie());
    const FrvOutcome rb = find_relevant_variable(b, Term{}, {}, y, z, p, NoiseOracle::exact_ie(), 0, {true});
    ASSERT_EQ(ra.index(), rb.index());
    if (std::holds_alternative<FrvUpdated>(ra)) {
      ++updated;
      EXPECT_TRUE(f.support().test(std::get<FrvUpdated>(rb).var - 1));
    }
  }
  EXPECT_GT(updated, 0);
}

TEST(NoiseMode, Parse) {
  EXPECT_EQ(parse_noise_mode("enum"), NoiseMode::kExactEnum);
  EXPECT_EQ(parse_noise_mode("ie"), NoiseMode::kExactIe);
  EXPECT_EQ(parse_noise_mode("sampled"), NoiseMode::kSampled);
  EXPECT_THROW(parse_noise_mode("exact"), ConfigError);
}
