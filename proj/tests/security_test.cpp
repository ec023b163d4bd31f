#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mergedpow/security.hpp"
#include "test_support.hpp"

using namespace mergedpow;

namespace {

BlockrateConfiguration cfg(std::vector<double> h, std::vector<double> b, std::vector<double> c, double delta) {
  return BlockrateConfiguration::from_vectors(h, b, c, delta);
}

// h = (2,1), c = (1,2), Δ = 1 with b = s·(1,1), so λ_a = 3s.
BlockrateConfiguration race_config(double target_lambda_a, double delta = 1.0) {
  const double s = target_lambda_a / 3.0;
  return cfg({2, 1}, {s, s}, {1, 2}, delta);
}

// Independent tail: enumerate all 2^n hack patterns.
double enumerated_tail(std::size_t n, double p) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
    if (2 * k < n) continue;
    total += std::pow(p, k) * std::pow(1 - p, n - k);
  }
  return total;
}

}  // namespace

TEST(Classify, SecureByBound) {
  const auto v = classify(cfg({2, 1}, {0.1, 0.1}, {1, 2}, 1));
  EXPECT_EQ(v.verdict, Verdict::SecureByBound);
  EXPECT_NEAR(v.lambda_a, 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(v.bounds.lower, 1.0);
  EXPECT_FALSE(v.simulated.has_value());
}

TEST(Classify, InsecureByBound) {
  const auto v = classify(cfg({2, 1}, {1, 1}, {1, 2}, 1));
  EXPECT_EQ(v.verdict, Verdict::InsecureByBound);
  EXPECT_EQ(v.lambda_a, 3.0);
  EXPECT_NEAR(v.bounds.upper, 1.3161, 1e-4);
}

TEST(Classify, BoundaryIsIndeterminate) {
  const auto v = classify(cfg({2, 1}, {2, 1}, {1, 2}, 0));
  EXPECT_EQ(v.lambda_a, 4.0);
  EXPECT_EQ(v.bounds.lower, 4.0);
  EXPECT_EQ(v.verdict, Verdict::Indeterminate);
}

TEST(Classify, RefinementOnlyBetweenBounds) {
  RefinementSettings rs{500.0, 10, 3, 3.0};
  EXPECT_FALSE(classify(cfg({2, 1}, {0.1, 0.1}, {1, 2}, 1), rs).simulated.has_value());

  // λ_a just above the lower bound, well below the simulated λ_h.
  const auto between = classify(race_config(1.02), rs);
  ASSERT_EQ(between.verdict, Verdict::Indeterminate);
  ASSERT_TRUE(between.simulated.has_value());
  ASSERT_TRUE(between.refined.has_value());
  EXPECT_EQ(*between.refined, RefinedVerdict::LikelySecure);
}

TEST(Classify, MonotoneInAdversaryRate) {
  std::mt19937_64 gen(8);
  auto rank = [](Verdict v) { return v == Verdict::SecureByBound ? 0 : v == Verdict::Indeterminate ? 1 : 2; };
  for (int rep = 0; rep < 300; ++rep) {
    const auto rc = support::random_config(gen, 1 + rep % 3);
    auto bigger = rc.b;
    bigger[rep % bigger.size()] += 0.5 * (rep % 5);
    const auto s1 = classify(cfg(rc.h, rc.b, rc.c, rc.delta));
    const auto v2 = classify(cfg(rc.h, bigger, rc.c, rc.delta)).verdict;
    EXPECT_GE(rank(v2), rank(s1.verdict));
    EXPECT_EQ(s1.verdict == Verdict::SecureByBound, s1.lambda_a < s1.bounds.lower);
    EXPECT_EQ(s1.verdict == Verdict::InsecureByBound, s1.lambda_a > s1.bounds.upper);
  }
}

TEST(PrivateAttack, NoAdversaryNeverWins) {
  const auto r = simulate_private_attack(cfg({2, 1}, {0, 0}, {1, 2}, 1), 100, 100, 20, 1);
  EXPECT_EQ(r.adversary_wins, 0u);
  EXPECT_EQ(r.win_fraction, 0.0);
  // Nobody mines at all: 0 does not strictly exceed 0.
  EXPECT_EQ(simulate_private_attack(cfg({0, 0}, {0, 0}, {1, 2}, 1), 10, 10, 5, 1).adversary_wins, 0u);
}

TEST(PrivateAttack, StrongAdversaryWins) {
  const double upper = upper_bound(race_config(0.0));
  const auto r = simulate_private_attack(race_config(1.5 * upper), 500, 500, 200, 11);
  EXPECT_GE(r.win_fraction, 0.95);
}

TEST(PrivateAttack, SwappingASecureConfigMakesItInsecure) {
  const auto secure = race_config(0.5 * lower_bound(race_config(0.0)));
  EXPECT_LE(simulate_private_attack(secure, 500, 500, 200, 12).win_fraction, 0.05);
  EXPECT_GE(simulate_private_attack(secure.swapped(), 500, 500, 200, 13).win_fraction, 0.95);
}

// Without delay the race is symmetric, so the swap reverses a winning attack.
TEST(PrivateAttack, ZeroDelaySwapReversesOutcome) {
  const auto strong = race_config(1.5 * 4.0, 0.0);
  EXPECT_GE(simulate_private_attack(strong, 500, 500, 200, 14).win_fraction, 0.95);
  EXPECT_LE(simulate_private_attack(strong.swapped(), 500, 500, 200, 15).win_fraction, 0.05);
}

TEST(PrivateAttack, WinFractionGrowsWithAdversaryRate) {
  const double upper = upper_bound(race_config(0.0));
  double prev = -1.0;
  const std::size_t trials = 200;
  for (double ratio : {0.5, 0.8, 1.0, 1.2, 1.5}) {
    const auto r = simulate_private_attack(race_config(ratio * upper), 200, 200, trials, 21);
    if (prev >= 0.0) {
      const double sigma = std::sqrt(0.25 / trials);
      EXPECT_GE(r.win_fraction, prev - 3.0 * sigma) << "ratio " << ratio;
    }
    prev = r.win_fraction;
  }
}

TEST(PrivateAttack, ValidatesAndIsDeterministic) {
  const auto c = race_config(2.0);
  EXPECT_THROW(simulate_private_attack(c, 100, 0, 10, 1), ValidationError);
  EXPECT_THROW(simulate_private_attack(c, 100, 200, 10, 1), ValidationError);
  EXPECT_THROW(simulate_private_attack(c, 100, 50, 0, 1), ValidationError);
  EXPECT_EQ(simulate_private_attack(c, 100, 50, 30, 4), simulate_private_attack(c, 100, 50, 30, 4));
}

TEST(Backdoor, ExactTail) {
  EXPECT_EQ(backdoor_insecurity_probability(4, 0.25), 0.26171875);
  EXPECT_EQ(backdoor_insecurity_probability(7, 0.0), 0.0);
  EXPECT_EQ(backdoor_insecurity_probability(7, 1.0), 1.0);
  EXPECT_THROW(backdoor_insecurity_probability(0, 0.5), ValidationError);
  EXPECT_THROW(backdoor_insecurity_probability(3, 1.5), ValidationError);
  for (std::size_t n = 1; n <= 16; ++n)
    for (double p : {0.05, 0.25, 0.4, 0.5, 0.9})
      EXPECT_NEAR(backdoor_insecurity_probability(n, p), enumerated_tail(n, p), 1e-12) << n << " " << p;
}

TEST(Backdoor, LargeNUsesLogSpace) {
  const double small = backdoor_insecurity_probability(2000, 0.25);
  EXPECT_GT(small, 0.0);
  EXPECT_LT(small, 1e-100);
  EXPECT_NEAR(backdoor_insecurity_probability(2001, 0.5), 0.5, 1e-9);
}

TEST(Backdoor, MonteCarloWithinThreeSigma) {
  const auto mc = backdoor_monte_carlo(4, 0.25, 100000, 3);
  EXPECT_NEAR(mc.probability, 0.26171875, 3.0 * mc.std_error);
  EXPECT_EQ(backdoor_monte_carlo(5, 0.0, 100, 1).probability, 0.0);
  EXPECT_EQ(backdoor_monte_carlo(5, 1.0, 100, 1).probability, 1.0);
}

TEST(Backdoor, DecaysExponentiallyInTypeCount) {
  std::vector<double> xs, ys;
  for (std::size_t n = 2; n <= 20; n += 2) {
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(backdoor_insecurity_probability(n, 0.25)));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  EXPECT_LT(sxy / sxx, 0.0);
  for (std::size_t i = 1; i < ys.size(); ++i) EXPECT_LT(ys[i], ys[i - 1]);
}
