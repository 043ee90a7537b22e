#include <cmath>
#include <optional>

#include <gtest/gtest.h>

#include "dnflearn/errors.hpp"
#include "dnflearn/generate.hpp"
#include "dnflearn/winnow.hpp"

using namespace dnflearn;

namespace {

using Active = std::vector<std::uint32_t>;

Assignment random_point(int n, Rng& rng) {
  Assignment x(n);
  for (int i = 1; i <= n; ++i) x.set(i, rng.bernoulli(0.5));
  return x;
}

FeatureCatalog sample_catalog() {
  FeatureCatalog c(2);
  c.add_to_r(0, 1);
  c.add_to_r(0, 2);
  c.add({Term{pos(3)}, var_set({4, 5, 6})});
  c.add({Term{neg(1), pos(6)}, var_set({2})});
  return c;
}

}  // namespace

TEST(WinnowCore, Initialization) {
  const WinnowCore w(7);
  EXPECT_EQ(w.size(), 7U);
  EXPECT_DOUBLE_EQ(w.theta(), 7.0);
  for (std::size_t j = 0; j < 7; ++j) {
    EXPECT_DOUBLE_EQ(w.w_pos(j), 1.0);
    EXPECT_DOUBLE_EQ(w.w_neg(j), 1.0);
  }
  EXPECT_THROW(WinnowCore(0), ConfigError);
  EXPECT_THROW(WinnowCore(3, 1.0), ConfigError);
}

TEST(WinnowCore, FreshPredictions) {
  const WinnowCore w(4);
  EXPECT_FALSE(w.predict(Active{}));
  EXPECT_FALSE(w.predict(Active{0, 1, 2, 3}));
  EXPECT_EQ(w.score(Active{0, 1, 2, 3}), 0);
}

TEST(WinnowCore, PromotionScalesExactly) {
  WinnowCore w(5);
  w.update(Active{1, 3}, true);
  EXPECT_DOUBLE_EQ(w.w_pos(1), 2.0);
  EXPECT_DOUBLE_EQ(w.w_neg(1), 0.5);
  EXPECT_DOUBLE_EQ(w.w_pos(3), 2.0);
  EXPECT_DOUBLE_EQ(w.w_pos(0), 1.0);
  EXPECT_EQ(w.mistakes(), 1U);
}

TEST(WinnowCore, EmptyUpdateCountsMistake) {
  WinnowCore w(3);
  w.update(Active{}, true);
  EXPECT_EQ(w.mistakes(), 1U);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(w.exponent(j), 0);
}

TEST(WinnowCore, UpdateOnlyOnMistakes) {
  WinnowCore w(3);
  EXPECT_THROW(w.update(Active{0}, false), ContractViolation);
}

TEST(WinnowCore, PromoteThenDemote) {
  // With w+ w- = 1 preserved, a promotion followed by a demotion of the same features
  // restores the weights; only the mistake count moves.
  WinnowCore w(2, 2.0, 1.0);
  w.update(Active{0}, true);
  ASSERT_TRUE(w.predict(Active{0}));
  w.update(Active{0}, false);
  EXPECT_DOUBLE_EQ(w.w_pos(0), 1.0);
  EXPECT_DOUBLE_EQ(w.w_neg(0), 1.0);
  EXPECT_EQ(w.mistakes(), 2U);
}

TEST(WinnowCore, ScriptedDominance) {
  WinnowCore w(4);
  for (int i = 0; i < 3; ++i) w.update(Active{2}, true);
  // Net weight of feature 2 is 8 - 1/8 = 7.875 >= 4.
  EXPECT_TRUE(w.predict(Active{2}));
  EXPECT_FALSE(w.predict(Active{1}));
  w.update(Active{1, 2}, false);
  // Feature 2 at exponent 2 and feature 1 at -1: 3.75 - 1.5 < 4.
  EXPECT_FALSE(w.predict(Active{1, 2}));
  EXPECT_FALSE(w.predict(Active{1}));
  EXPECT_LT(w.score(Active{1}), 0);
}

TEST(WinnowSparse, LearnsDisjunction) {
  // Target: feature 3 or feature 17 among 64.
  Rng rng(9);
  std::vector<SparseExample> pool;
  for (int i = 0; i < 300; ++i) {
    SparseExample ex;
    for (std::uint32_t j = 0; j < 64; ++j)
      if (rng.bernoulli(0.1)) ex.active.push_back(j);
    ex.label = std::count(ex.active.begin(), ex.active.end(), 3U) + std::count(ex.active.begin(), ex.active.end(), 17U) > 0;
    pool.push_back(ex);
  }
  WinnowCore w(64);
  auto eq = [&](const WinnowCore& h) -> std::optional<SparseExample> {
    for (const SparseExample& ex : pool)
      if (h.predict(ex.active) != ex.label) return ex;
    return std::nullopt;
  };
  const SparseRunResult r = winnow_run_sparse(w, eq, 10000);
  EXPECT_TRUE(r.learned);
  EXPECT_LE(r.mistakes, 8U * 4U * 6U);

  WinnowCore fresh(64);
  const SparseRunResult capped = winnow_run_sparse(fresh, eq, 1);
  EXPECT_FALSE(capped.learned);
  EXPECT_EQ(capped.mistakes, 2U);
  EXPECT_THROW(winnow_run_sparse(fresh, eq, 0), ConfigError);
}

TEST(WeightScale, FixedPoint) {
  const WeightScale s(2.0);
  EXPECT_EQ(s.net(0), 0);
  EXPECT_EQ(s.net(1), s.fixed(1.5));
  EXPECT_EQ(s.net(-1), -s.fixed(1.5));
  EXPECT_EQ(s.net(1000), s.net(WeightScale::kMaxExponent));
  EXPECT_EQ(score_string(s.fixed(3.0)), std::to_string(3LL << WeightScale::kFracBits));
}

TEST(CatalogWinnow, Initialization) {
  const FeatureCatalog c = sample_catalog();
  const CatalogWinnow w(c, 6);
  EXPECT_EQ(w.feature_count(), c.feature_count());
  EXPECT_DOUBLE_EQ(w.theta(), static_cast<double>(c.feature_count()));
  EXPECT_EQ(w.snapshot_id(), c.snapshot_id());
  EXPECT_FALSE(w.predict(Assignment::ones(6)));
  EXPECT_EQ(w.score(Assignment::ones(6)), 0);
}

TEST(CatalogWinnow, RoutesAgree) {
  const FeatureCatalog c = sample_catalog();
  const auto feats = enumerate_features(c);
  CatalogWinnow w(c, 6);
  WinnowCore ref(feats.size(), 2.0, static_cast<double>(feats.size()));
  Rng rng(12);
  auto active_of = [&](const Assignment& x) {
    Active a;
    for (std::size_t j = 0; j < feats.size(); ++j)
      if (eval_feature(c, feats[j], x)) a.push_back(static_cast<std::uint32_t>(j));
    return a;
  };
  for (int step = 0; step < 200; ++step) {
    const Assignment x = random_point(6, rng);
    const Active a = active_of(x);
    ASSERT_EQ(w.score(x), ref.score(a));
    ASSERT_EQ(w.score(x), w.score_direct(x));
    ASSERT_EQ(w.predict(x), w.predict_lex(x.lex_index()));
    const bool label = !w.predict(x);
    if (rng.bernoulli(0.7)) {
      w.update(x, label);
      ref.update(a, label);
    }
  }
  for (std::size_t j = 0; j < feats.size(); ++j) EXPECT_EQ(w.exponent(feats[j].pair, feats[j].vars), ref.exponent(j));
}

TEST(CatalogWinnow, DenseLimit) {
  FeatureCatalog c(2);
  for (int v = 1; v <= 5; ++v) c.add_to_r(0, v);
  EXPECT_THROW(CatalogWinnow(c, 8, 2.0, 0.0, 4), ConfigError);
}

TEST(CatalogWinnow, LearnsExpressibleTarget) {
  // x1 & x2 | x3 over pair (empty stem, R = {1,2,3}) with degree-2 features.
  const Dnf f(5, {Term{pos(1), pos(2)}, Term{pos(3)}});
  FeatureCatalog c(2);
  for (int v : {1, 2, 3}) c.add_to_r(0, v);
  CatalogWinnow w(c, 5);
  Teacher t(f);
  const WinnowExit e = winnow_run(t, w, 500);
  EXPECT_EQ(e.kind, WinnowExitKind::kLearned);
  EXPECT_LE(e.mistakes, 500U);
  for (const Assignment& p : e.pos) EXPECT_TRUE(eval_dnf(f, p));
  EXPECT_TRUE(exhaustively_equal(f, CatalogWinnowHypothesis(w)));
  EXPECT_TRUE(exhaustively_equal(f, DirectWinnowHypothesis(w)));
}

TEST(CatalogWinnow, CapExceededAndPositives) {
  const Dnf f(6, {Term{pos(1), pos(2), pos(3), pos(4), pos(5)}});
  const FeatureCatalog c(2);
  CatalogWinnow w(c, 6);
  Teacher t(f);
  std::vector<Assignment> seen;
  WinnowHooks hooks;
  hooks.on_positive = [&](const Assignment& x) { seen.push_back(x); };
  const WinnowExit e = winnow_run(t, w, 1, hooks);
  EXPECT_EQ(e.kind, WinnowExitKind::kCapExceeded);
  EXPECT_EQ(e.mistakes, 2U);
  EXPECT_EQ(e.pos, seen);
  for (const Assignment& p : e.pos) EXPECT_TRUE(eval_dnf(f, p));
  EXPECT_NE(e.to_json(1, c.snapshot_id(), c.feature_count()).find("cap"), std::string::npos);
}

TEST(CatalogWinnow, NegativeHookAborts) {
  const Dnf f(4, {Term{pos(1), pos(2)}});
  FeatureCatalog c(2);
  c.add_to_r(0, 3);
  CatalogWinnow w(c, 4);
  Teacher t(f);
  WinnowHooks hooks;
  int negatives = 0;
  hooks.on_negative = [&](const Assignment& x) {
    EXPECT_FALSE(eval_dnf(f, x));
    ++negatives;
    return true;
  };
  const WinnowExit e = winnow_run(t, w, 100, hooks);
  EXPECT_EQ(e.kind, WinnowExitKind::kAborted);
  EXPECT_EQ(negatives, 1);
}
