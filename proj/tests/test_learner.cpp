#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pafc/learner.hpp"
#include "pafc/representation.hpp"

using namespace pafc;

namespace {

const std::vector<double> kWorkedMu{0.48, 0.32, 0.12, 0.08};

OnlineBinaryClassifier worked_classifier() {
  return OnlineBinaryClassifier({0.8, -0.2, -0.4, -0.7}, UpdateRule::passive_aggressive, std::nullopt);
}

struct Triple {
  std::vector<double> f, w;
  BinaryLabel y;
};

Triple random_triple(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0), weight(-3.0, 3.0);
  Triple t;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    t.f.push_back(unit(rng));
    t.w.push_back(weight(rng));
  }
  t.y = unit(rng) < 0.5 ? BinaryLabel::positive : BinaryLabel::negative;
  return t;
}

}  // namespace

TEST(Score, WorkedExampleTotal) { EXPECT_NEAR(worked_classifier().score(kWorkedMu), 0.216, 1e-12); }

TEST(Score, ZeroAndSumCases) {
  EXPECT_EQ(OnlineBinaryClassifier::passive_aggressive(3).score(std::vector<double>{0.3, 0.1, 0.9}), 0.0);
  const OnlineBinaryClassifier ones({1.0, 1.0}, UpdateRule::passive_aggressive, std::nullopt);
  EXPECT_DOUBLE_EQ(ones.score(std::vector<double>{0.3, 0.7}), 1.0);
  EXPECT_THROW(ones.score(std::vector<double>{0.3}), std::invalid_argument);
}

TEST(Predict, SignConvention) {
  EXPECT_EQ(worked_classifier().predict(kWorkedMu), BinaryLabel::positive);
  EXPECT_EQ(OnlineBinaryClassifier::passive_aggressive(2).predict(std::vector<double>{0.5, 0.5}), BinaryLabel::positive);
  const OnlineBinaryClassifier neg({-1.0}, UpdateRule::passive_aggressive, std::nullopt);
  EXPECT_EQ(neg.predict(std::vector<double>{0.5}), BinaryLabel::negative);
}

TEST(HingeLoss, Cases) {
  const std::vector<double> f{0.2, 0.9};
  EXPECT_DOUBLE_EQ(hinge_loss(f, BinaryLabel::positive, std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(hinge_loss(std::vector<double>{1.0}, BinaryLabel::positive, std::vector<double>{1.5}), 0.0);
  EXPECT_NEAR(worked_classifier().hinge_loss(kWorkedMu, BinaryLabel::negative), 1.216, 1e-12);
  EXPECT_THROW(hinge_loss(f, BinaryLabel::positive, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(PaUpdate, FirstStepFromZero) {
  auto clf = OnlineBinaryClassifier::passive_aggressive(4);
  const auto outcome = clf.pa_update(kWorkedMu, BinaryLabel::positive);
  EXPECT_TRUE(outcome.changed);
  EXPECT_DOUBLE_EQ(outcome.loss, 1.0);
  const std::vector<double> expected{1.3574660633484161, 0.9049773755656109, 0.33936651583710403, 0.22624434389140272};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(clf.weights()[i], expected[i], 1e-12);
  EXPECT_NEAR(clf.score(kWorkedMu), 1.0, 1e-12);
}

TEST(PaUpdate, PassiveWhenMarginMet) {
  OnlineBinaryClassifier clf({2.0, 1.0}, UpdateRule::passive_aggressive, std::nullopt);
  const auto outcome = clf.pa_update(std::vector<double>{1.0, 0.0}, BinaryLabel::positive);
  EXPECT_FALSE(outcome.changed);
  EXPECT_EQ(clf.weights()[0], 2.0);
  EXPECT_EQ(clf.weights()[1], 1.0);
}

TEST(PaUpdate, ZeroFeaturesAreFlaggedNotFatal) {
  auto clf = OnlineBinaryClassifier::passive_aggressive(3);
  const auto outcome = clf.pa_update(std::vector<double>{0.0, 0.0, 0.0}, BinaryLabel::negative);
  EXPECT_TRUE(outcome.degenerate);
  EXPECT_FALSE(outcome.changed);
  for (double w : clf.weights()) EXPECT_EQ(w, 0.0);
}

TEST(PaUpdate, LengthMismatch) {
  auto clf = OnlineBinaryClassifier::passive_aggressive(3);
  EXPECT_THROW(clf.pa_update(std::vector<double>{1.0}, BinaryLabel::positive), std::invalid_argument);
}

TEST(PaUpdate, RandomTripleProperties) {
  std::mt19937_64 rng(2024);
  int active = 0, passive = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = random_triple(rng);
    OnlineBinaryClassifier clf(t.w, UpdateRule::passive_aggressive, std::nullopt);
    const double y = sign_of(t.y);
    const double margin = y * dot(t.w, t.f);
    clf.pa_update(t.f, t.y);
    if (margin >= 1.0) {
      ++passive;
      for (std::size_t i = 0; i < t.w.size(); ++i) ASSERT_EQ(clf.weights()[i], t.w[i]);
      continue;
    }
    ++active;
    ASSERT_NEAR(y * clf.score(t.f), 1.0, 1e-9);
    const double tau = (1.0 - margin) / dot(t.f, t.f);
    for (std::size_t i = 0; i < t.w.size(); ++i) ASSERT_NEAR(clf.weights()[i] - t.w[i], tau * y * t.f[i], 1e-9);
  }
  EXPECT_GT(active, 100);
  EXPECT_GT(passive, 100);
}

TEST(Predict, InvariantUnderPositiveScaling) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> lambda(0.01, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = random_triple(rng);
    OnlineBinaryClassifier clf(t.w, UpdateRule::passive_aggressive, std::nullopt);
    const auto before = clf.predict(t.f);
    clf.scale(lambda(rng));
    ASSERT_EQ(clf.predict(t.f), before);
  }
}

TEST(DeltaUpdate, Examples) {
  auto clf = OnlineBinaryClassifier::delta(2, 0.1);
  clf.update(std::vector<double>{1.0, 1.0}, BinaryLabel::positive);
  EXPECT_NEAR(clf.weights()[0], 0.1, 1e-15);
  EXPECT_NEAR(clf.weights()[1], 0.1, 1e-15);

  OnlineBinaryClassifier exact({0.5, 0.5}, UpdateRule::delta, 0.3);
  const auto outcome = exact.update(std::vector<double>{1.0, 1.0}, BinaryLabel::positive);
  EXPECT_FALSE(outcome.changed);
  EXPECT_EQ(exact.weights()[0], 0.5);

  EXPECT_THROW(OnlineBinaryClassifier::delta(2, 0.0), std::invalid_argument);
  EXPECT_THROW(clf.delta_update(std::vector<double>{1.0, 1.0}, BinaryLabel::positive, -1.0), std::invalid_argument);
}

TEST(DeltaUpdate, SquaredErrorDecreasesOnSeparablePair) {
  auto clf = OnlineBinaryClassifier::delta(2, 0.05);
  const std::vector<std::vector<double>> xs{augment_bias(std::vector<double>{0.1}), augment_bias(std::vector<double>{0.9})};
  const BinaryLabel ys[] = {BinaryLabel::negative, BinaryLabel::positive};
  auto total_error = [&] {
    double e = 0.0;
    for (int i = 0; i < 2; ++i) e += std::pow(sign_of(ys[i]) - clf.score(xs[i]), 2);
    return e;
  };
  double previous = total_error();
  for (int epoch = 0; epoch < 200; ++epoch) {
    for (int i = 0; i < 2; ++i) clf.update(xs[i], ys[i]);
    const double now = total_error();
    ASSERT_LE(now, previous + 1e-12);
    previous = now;
  }
  EXPECT_EQ(clf.predict(xs[0]), BinaryLabel::negative);
  EXPECT_EQ(clf.predict(xs[1]), BinaryLabel::positive);
}

TEST(AugmentBias, AppendsOne) {
  EXPECT_EQ(augment_bias(std::vector<double>{0.2, 0.4}), (std::vector<double>{0.2, 0.4, 1.0}));
  EXPECT_EQ(augment_bias(std::vector<double>{}), (std::vector<double>{1.0}));
  EXPECT_EQ(augment_bias(std::vector<double>{1, 1, 1}), (std::vector<double>{1, 1, 1, 1}));
}

TEST(OnlineBinaryClassifier, LearningRateOnlyForDelta) {
  EXPECT_THROW(OnlineBinaryClassifier({0.0}, UpdateRule::delta, std::nullopt), std::invalid_argument);
  EXPECT_THROW(OnlineBinaryClassifier({0.0}, UpdateRule::passive_aggressive, 0.1), std::invalid_argument);
  EXPECT_FALSE(OnlineBinaryClassifier::passive_aggressive(2).learning_rate());
}

TEST(FeatureMap, LinearAddsBias) {
  const auto fm = FeatureMap::linear_with_bias(2);
  EXPECT_EQ(fm.feature_dimension(), 3u);
  EXPECT_EQ(fm.transform(std::vector<double>{0.2, 0.4}), (std::vector<double>{0.2, 0.4, 1.0}));
  EXPECT_THROW(fm.transform(std::vector<double>{0.2}), std::invalid_argument);
}
