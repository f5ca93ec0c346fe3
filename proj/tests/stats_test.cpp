#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hcube/rng.hpp"
#include "hcube/stats.hpp"

namespace hcube {
namespace {

std::vector<double> exp1_sample(std::uint64_t seed, std::size_t n) {
  RngStream rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = -std::log1p(-rng.next_uniform());
  return out;
}

TEST(SurvivalTest, Basics) {
  EXPECT_THROW(EmpiricalDist({}).survival(0.0), std::domain_error);
  const EmpiricalDist d({3.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(d.survival(1.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.survival(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(d.survival(3.0), 0.0);
  EXPECT_DOUBLE_EQ(d.survival(2.0), 1.0 / 3.0);
}

TEST(SurvivalTest, CensoredCountAsExceeding) {
  const EmpiricalDist d({1.0, 2.0}, 2, 10.0);
  EXPECT_DOUBLE_EQ(d.survival(1.5), 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(d.survival(9.0), 2.0 / 4.0);
  EXPECT_THROW(d.survival(10.0), std::domain_error);
  EXPECT_THROW(d.ks_exp1(), std::domain_error);
  EXPECT_THROW(d.mean_ci(), std::domain_error);
}

TEST(SurvivalTest, RejectsBadSamples) {
  EXPECT_THROW(EmpiricalDist({-1.0}), std::invalid_argument);
  EXPECT_THROW(EmpiricalDist({NAN}), std::invalid_argument);
}

TEST(SurvivalProperty, NonIncreasing) {
  const EmpiricalDist d(exp1_sample(1, 500));
  double prev = 1.0;
  for (double t = -1.0; t < 8.0; t += 0.01) {
    const double s = d.survival(t);
    ASSERT_LE(s, prev);
    prev = s;
  }
}

TEST(KsTest, DegenerateSamples) {
  EXPECT_DOUBLE_EQ(EmpiricalDist(std::vector<double>(10, 0.0)).ks_exp1(), 1.0);
  EXPECT_NEAR(EmpiricalDist(std::vector<double>(10, std::log(2.0))).ks_exp1(), 0.5, 1e-12);
  EXPECT_THROW(EmpiricalDist({}).ks_exp1(), std::domain_error);
}

TEST(KsTest, SingleSampleUsesBothEdges) {
  // CDF(1) = 0.632: left edge gap 0.632, right edge gap 0.368.
  EXPECT_NEAR(EmpiricalDist({1.0}).ks_exp1(), 1.0 - std::exp(-1.0), 1e-12);
}

TEST(KsTest, ExponentialSampleWithinCriticalValue) {
  const std::size_t n = 10'000;
  EXPECT_LE(EmpiricalDist(exp1_sample(2, n)).ks_exp1(), 1.63 / std::sqrt(double(n)));
}

// Over repeated Exp(1) samples the 1.63/sqrt(n) critical value is exceeded
// about 1% of the time.
TEST(KsTest, CriticalValueRejectionRate) {
  const std::size_t n = 1000;
  int exceed = 0;
  for (std::uint64_t rep = 0; rep < 400; ++rep) {
    exceed += EmpiricalDist(exp1_sample(derive_trial_seed(3, rep), n)).ks_exp1() > 1.63 / std::sqrt(double(n));
  }
  EXPECT_LE(exceed, 12);
}

TEST(KsProperty, OrderInvariant) {
  auto a = exp1_sample(4, 300);
  auto b = a;
  std::reverse(b.begin(), b.end());
  EXPECT_EQ(EmpiricalDist(a).ks_exp1(), EmpiricalDist(b).ks_exp1());
}

TEST(MeanCiTest, Examples) {
  const MeanCI a = EmpiricalDist({1, 1, 1, 1}).mean_ci();
  EXPECT_DOUBLE_EQ(a.mean, 1.0);
  EXPECT_DOUBLE_EQ(a.half_width, 0.0);
  const MeanCI b = EmpiricalDist({0, 2}).mean_ci();
  EXPECT_DOUBLE_EQ(b.mean, 1.0);
  EXPECT_NEAR(b.half_width, 1.96, 1e-12);
  EXPECT_THROW(EmpiricalDist({1.0}).mean_ci(), std::domain_error);
}

TEST(MeanCiTest, Coverage) {
  int covered = 0;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    const MeanCI ci = EmpiricalDist(exp1_sample(derive_trial_seed(5, rep), 2000)).mean_ci();
    covered += std::abs(ci.mean - 1.0) <= ci.half_width;
  }
  EXPECT_GE(covered, 930);
  EXPECT_LE(covered, 970);
}

TEST(MeanCiProperty, HalfWidthScalesWithRootN) {
  const auto full = exp1_sample(6, 20'000);
  const std::vector<double> half(full.begin(), full.begin() + 10'000);
  const double ratio = EmpiricalDist(half).mean_ci().half_width / EmpiricalDist(full).mean_ci().half_width;
  EXPECT_GE(ratio, 1.2);
  EXPECT_LE(ratio, 1.7);
}

TEST(ScaledTest, ScalesSamplesAndCensorPoint) {
  const EmpiricalDist d = EmpiricalDist({2.0, 4.0}, 1, 8.0).scaled(0.5);
  EXPECT_EQ(d.samples(), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(d.censor_point(), 4.0);
  EXPECT_THROW(d.scaled(0.0), std::invalid_argument);
}

}  // namespace
}  // namespace hcube
