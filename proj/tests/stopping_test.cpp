#include <cmath>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "hcube/stopping.hpp"
#include "oracles.hpp"

namespace hcube {
namespace {

TEST(PathLengthTest, Floors) {
  EXPECT_EQ(path_length(12, 0.5), 3u);
  EXPECT_EQ(path_length(16, 0.5), 4u);
  EXPECT_EQ(path_length(64, 0.5), 8u);
  EXPECT_EQ(path_length(10, 0.1), 1u);
  EXPECT_EQ(path_length(1000, 1.0 / 3.0), 10u);
}

TEST(PathReturnConfigTest, Validation) {
  PathReturnConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.gamma = 0.5;
  c.cap = 3;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.cap = 0;
  c.delta = 0.6;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.delta = 0.25;
  EXPECT_EQ(c.effective_cap(), static_cast<std::uint64_t>(std::ceil(64.0 * 4096 / 4)));
}

TEST(PathReturnTest, ReturnsAfterPathAndIsDeterministic) {
  PathReturnConfig c;
  c.n = 8;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    const PathReturnSample s = sample_path_return(c, trial);
    ASSERT_FALSE(s.r.censored);
    ASSERT_GT(s.r.value, c.m());
    ASSERT_GE(s.v_size, 1u);
    ASSERT_LE(s.v_size, c.m() + 1);
    ASSERT_EQ(sample_path_return(c, trial).r, s.r);
  }
}

TEST(PathReturnTest, AfterFirstExitRuleWaitsForExit) {
  PathReturnConfig c;
  c.n = 8;
  c.walk_kind = WalkKind::Aperiodic;
  int immediate_literal = 0, immediate_exit = 0;
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    c.rule = ReturnRule::Literal;
    immediate_literal += sample_path_return(c, trial).r.value == c.m() + 1;
    c.rule = ReturnRule::AfterFirstExit;
    const StopTime r = sample_path_return(c, trial).r;
    ASSERT_GE(r.value, c.m() + 2);
    immediate_exit += r.value == c.m() + 1;
  }
  // The lazy walk stays put with probability 1/2, so the literal rule returns
  // immediately at least half the time.
  EXPECT_GT(immediate_literal, trials * 0.45);
  EXPECT_EQ(immediate_exit, 0);
}

// Exact law of R_N at n = 10, m = 3 (dense absorption on all 1024 states).
class PathReturnOracle : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { survival_ = oracle::path_return_survival(10, 3, 12000); }
  static std::vector<double> survival_;
};
std::vector<double> PathReturnOracle::survival_;

TEST_F(PathReturnOracle, MeanMatchesExactLaw) {
  ASSERT_LT(survival_.back(), 1e-9);
  double exact_mean = 0.0;
  for (double s : survival_) exact_mean += s;

  PathReturnConfig c;
  c.n = 10;
  const int trials = 4000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    const StopTime r = sample_path_return(c, i).r;
    ASSERT_FALSE(r.censored);
    sum += static_cast<double>(r.value);
    sq += static_cast<double>(r.value) * static_cast<double>(r.value);
  }
  const double mean = sum / trials;
  const double sd = std::sqrt(sq / trials - mean * mean);
  EXPECT_NEAR(mean, exact_mean, 4 * sd / std::sqrt(double(trials)));
}

TEST_F(PathReturnOracle, SurvivalMatchesExactLaw) {
  PathReturnConfig c;
  c.n = 10;
  c.master_seed = 77;
  const int trials = 4000;
  std::vector<std::uint64_t> values;
  for (int i = 0; i < trials; ++i) values.push_back(sample_path_return(c, i).r.value);
  for (std::size_t t : {4, 5, 17, 100, 300, 600, 1024}) {
    int above = 0;
    for (auto v : values) above += v > t;
    const double p = survival_[t];
    EXPECT_LT(std::abs(above - trials * p), 4 * std::sqrt(trials * p * (1 - p)) + 1) << "t=" << t;
  }
}

TEST_F(PathReturnOracle, BetaNearExactQuantile) {
  std::uint64_t exact_beta = 1;
  while (survival_[exact_beta - 1] > std::exp(-1.0)) ++exact_beta;
  PathReturnConfig c;
  c.n = 10;
  c.pilot_trials = 2000;
  const BetaEstimate b = estimate_beta(c);
  EXPECT_NEAR(static_cast<double>(b.beta_hat), static_cast<double>(exact_beta), 0.15 * exact_beta);
}

// Short-path limit: m = 1, V = {state(0), state(1)}. Exact law of R on
// {2, 3, 4} by enumerating all 10^4 index words.
TEST(PathReturnTest, SmallGammaMatchesEnumeration) {
  const unsigned n = 10;
  std::map<std::uint64_t, double> exact;
  for (unsigned w = 0; w < 10'000; ++w) {
    std::vector<unsigned> word{w / 1000, (w / 100) % 10, (w / 10) % 10, w % 10};
    const auto pos = oracle::positions(word);
    for (std::uint64_t t = 2; t <= 4; ++t) {
      if (pos[t] == pos[0] || pos[t] == pos[1]) {
        exact[t] += 1e-4;
        break;
      }
    }
  }
  EXPECT_NEAR(exact[2], 1.0 / n, 1e-12);

  PathReturnConfig c;
  c.n = n;
  c.gamma = 0.1;
  ASSERT_EQ(c.m(), 1u);
  const int trials = 20'000;
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < trials; ++i) ++counts[sample_path_return(c, i).r.value];
  for (std::uint64_t t = 2; t <= 4; ++t) {
    const double p = exact[t];
    EXPECT_LT(std::abs(counts[t] - trials * p), 4 * std::sqrt(trials * p * (1 - p)) + 1) << "t=" << t;
  }
}

TEST(EtaVisitTest, RejectsEtaOnPath) {
  PathReturnConfig c;
  c.n = 8;
  EXPECT_THROW(sample_eta_visit(c, all_plus(8), 0), std::invalid_argument);
  EXPECT_THROW(sample_eta_visit(c, all_minus(9), 0), std::invalid_argument);
}

TEST(EtaVisitTest, FiniteBeforeCap) {
  PathReturnConfig c;
  c.n = 10;
  c.walk_kind = WalkKind::Aperiodic;
  // Adjacent to the endpoint in the sense of differing from all_plus in m+1
  // coordinates: cannot lie on V (within distance m of all_plus).
  Vertex eta = all_plus(10);
  for (unsigned j = 0; j <= c.m(); ++j) eta.set(j, false);
  int finite = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const StopTime r = sample_eta_visit(c, eta, i);
    EXPECT_GE(r.value, 1u);
    finite += !r.censored;
  }
  EXPECT_GE(finite, trials * 0.99);
}

TEST(EtaVisitTest, SharesStreamWithPathWalk) {
  // With eta = all_minus under the aperiodic coupling, once the two walks
  // meet the eta walk follows the all_plus walk, so R^eta is finite.
  PathReturnConfig c;
  c.n = 6;
  c.walk_kind = WalkKind::Aperiodic;
  for (int i = 0; i < 200; ++i) {
    const StopTime r = sample_eta_visit(c, all_minus(6), i);
    ASSERT_FALSE(r.censored);
    ASSERT_EQ(sample_eta_visit(c, all_minus(6), i), r);
  }
}

TEST(BetaTest, DegenerateSample) {
  std::vector<StopTime> s(1000, StopTime::observed(17));
  EXPECT_EQ(empirical_beta(s), 18u);
}

TEST(BetaTest, QuantileDefinition) {
  // Values 1..100: P(R >= t) = (101 - t)/100 <= 1/e first at t = 65.
  std::vector<StopTime> s;
  for (std::uint64_t v = 1; v <= 100; ++v) s.push_back(StopTime::observed(v));
  EXPECT_EQ(empirical_beta(s), 65u);
}

TEST(BetaTest, CensoringErrors) {
  std::vector<StopTime> all(600, StopTime::censored_at(50));
  EXPECT_THROW(empirical_beta(all), std::domain_error);
  std::vector<StopTime> many(600, StopTime::observed(3));
  for (int i = 0; i < 300; ++i) many[i] = StopTime::censored_at(50);
  EXPECT_THROW(empirical_beta(many), std::domain_error);
  EXPECT_THROW(empirical_beta({}), std::domain_error);

  PathReturnConfig c;
  c.n = 8;
  c.pilot_trials = 100;
  EXPECT_THROW(estimate_beta(c), std::invalid_argument);
}

TEST(BetaTest, DeterministicAndDisjointSeeds) {
  PathReturnConfig c;
  c.n = 8;
  c.pilot_trials = 500;
  const BetaEstimate a = estimate_beta(c), b = estimate_beta(c);
  EXPECT_EQ(a.beta_hat, b.beta_hat);
  EXPECT_EQ(a.pilot_seed, pilot_seed_for(c.master_seed));
  std::set<std::uint64_t> eval;
  for (std::uint64_t i = 0; i < 5000; ++i) eval.insert(derive_trial_seed(c.master_seed, i));
  for (std::uint64_t i = 0; i < 2000; ++i) EXPECT_FALSE(eval.contains(derive_trial_seed(a.pilot_seed, i)));
}

TEST(BetaTest, SplitHalvesAgree) {
  PathReturnConfig c;
  c.n = 12;
  c.master_seed = pilot_seed_for(3);
  std::vector<StopTime> first, second;
  for (std::uint64_t i = 0; i < 2000; ++i) (i < 1000 ? first : second).push_back(sample_path_return(c, i).r);
  const double b1 = static_cast<double>(empirical_beta(first));
  const double b2 = static_cast<double>(empirical_beta(second));
  EXPECT_LE(std::abs(b1 - b2), 0.10 * 0.5 * (b1 + b2));
}

TEST(RandomSetTest, AlwaysMemberWhenPIsOne) {
  ThetaConfig c;
  c.n = 16;
  c.inclusion_prob = 1.0;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_theta(c, i).theta, StopTime::observed(1));
}

TEST(RandomSetTest, MembershipIsMemoized) {
  RandomSetMembership set(0.5, RngStream(8));
  WalkEngine walk(WalkKind::Periodic, all_plus(4), RngStream(9));
  std::map<std::uint64_t, bool> first;
  for (int t = 0; t < 2000; ++t) {
    const Vertex v = walk.step().state;
    const bool member = set.contains(v);
    auto [it, inserted] = first.emplace(v.word(0), member);
    ASSERT_EQ(it->second, member);
    ASSERT_EQ(set.known(v), member);
  }
  EXPECT_EQ(set.draws(), first.size());
  EXPECT_EQ(set.draws(), 16u);
}

TEST(RandomSetTest, InclusionFrequency) {
  RandomSetMembership set(0.2, RngStream(10));
  const int n = 100'000;
  int members = 0;
  for (int i = 0; i < n; ++i) members += set.contains(Vertex::from_words(64, static_cast<std::uint64_t>(i)));
  EXPECT_LT(std::abs(members - n * 0.2), 4 * std::sqrt(n * 0.16));
  EXPECT_THROW(RandomSetMembership(1.5, RngStream(0)), std::invalid_argument);
}

TEST(ThetaTest, StartMembershipDoesNotStop) {
  ThetaConfig c;
  c.n = 32;
  int start_in = 0;
  for (int i = 0; i < 2000; ++i) {
    const ThetaSample s = sample_theta(c, i);
    EXPECT_GE(s.theta.value, 1u);
    start_in += s.start_in_set;
  }
  const double p = c.p();
  EXPECT_LT(std::abs(start_in - 2000 * p), 4 * std::sqrt(2000 * p * (1 - p)));
}

TEST(ThetaTest, ConfigAndCap) {
  ThetaConfig c;
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.gamma = 0.5;
  c.n = 16;
  EXPECT_EQ(c.effective_cap(), 256u);
  EXPECT_DOUBLE_EQ(c.p(), 0.25);
}

TEST(ThetaTest, SharedSetBatchesAreDeterministic) {
  ThetaConfig c;
  c.n = 16;
  const auto a = sample_theta_shared_set(c, 3, 50);
  const auto b = sample_theta_shared_set(c, 3, 50);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].theta, b[i].theta);
    EXPECT_EQ(a[i].start_in_set, a[0].start_in_set);  // same M, same start
  }
}

}  // namespace
}  // namespace hcube
