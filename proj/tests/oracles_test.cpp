#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mergedpow/chainsim.hpp"
#include "mergedpow/oracles.hpp"
#include "test_support.hpp"

using namespace mergedpow;

namespace {

std::vector<double> times_of(const GuaranteedTrace& gt) {
  std::vector<double> out;
  for (const auto& g : gt.guaranteed) out.push_back(g.time);
  return out;
}

}  // namespace

TEST(DeltaIntervalDeletion, HandTrace) {
  const auto trace = make_trace({{0.5, 0}, {1.2, 0}, {1.4, 0}, {2.6, 0}, {3.0, 0}}, 1, 4.0);
  const auto gt = delta_interval_deletion(trace, 1.0);
  EXPECT_EQ(times_of(gt), (std::vector<double>{0.5, 2.6}));
  EXPECT_EQ(gt.per_type_counts, (std::vector<std::size_t>{2}));
}

TEST(DeltaIntervalDeletion, ArrivalExactlyDeltaLaterIsDeleted) {
  const auto trace = make_trace({{1.0, 0}, {2.0, 0}, {2.5, 0}}, 1, 3.0);
  EXPECT_EQ(times_of(delta_interval_deletion(trace, 1.0)), (std::vector<double>{1.0, 2.5}));
}

TEST(DeltaIntervalDeletion, ZeroDelayKeepsEverything) {
  const auto trace = generate_trace({2.0, 1.0}, 100.0, 4);
  const auto gt = delta_interval_deletion(trace, 0.0, {1.0, 2.0});
  ASSERT_EQ(gt.guaranteed.size(), trace.events.size());
  for (std::size_t i = 0; i < gt.guaranteed.size(); ++i)
    EXPECT_EQ(gt.guaranteed[i].effective_score, trace.events[i].type == 0 ? 1.0 : 2.0);
}

TEST(DeltaIntervalDeletion, GuaranteedBlocksAreSpacedAndFromTrace) {
  const auto trace = generate_trace({2.0, 1.0, 0.5}, 300.0, 8);
  const double delta = 0.6;
  const auto gt = delta_interval_deletion(trace, delta);
  for (std::size_t i = 1; i < gt.guaranteed.size(); ++i)
    EXPECT_GT(gt.guaranteed[i].time - gt.guaranteed[i - 1].time, delta);
  for (const auto& g : gt.guaranteed) {
    const bool found = std::any_of(trace.events.begin(), trace.events.end(), [&](const ArrivalEvent& e) {
      return e.time == g.time && e.type == g.type;
    });
    EXPECT_TRUE(found);
  }
}

// ρ_i = h_i / (1 + Δ Σ h) = 2/2.5 and 1/2.5; score rate (1·2 + 2·1)/2.5.
TEST(DeltaIntervalDeletion, GuaranteedRatesConverge) {
  const double horizon = 1e4;
  const auto trace = generate_trace({2.0, 1.0}, horizon, 17);
  const auto gt = delta_interval_deletion(trace, 0.5, {1.0, 2.0});
  EXPECT_NEAR(gt.per_type_counts[0] / horizon, 0.8, 0.03 * 0.8);
  EXPECT_NEAR(gt.per_type_counts[1] / horizon, 0.4, 0.03 * 0.4);
  EXPECT_NEAR(guaranteed_score_rate(gt, horizon), 1.6, 0.03 * 1.6);
}

TEST(DeltaIntervalDeletion, SingleTypeRateMatchesFixedPoint) {
  const double horizon = 2e4;
  for (double delta : {0.25, 1.0, 2.0}) {
    const auto trace = generate_trace({1.5}, horizon, 21);
    const auto gt = delta_interval_deletion(trace, delta);
    const double expected = 1.5 / (1.0 + 1.5 * delta);
    EXPECT_NEAR(gt.guaranteed.size() / horizon, expected, 0.03 * expected) << "delta=" << delta;
  }
}

TEST(SmallBlockIncrease, HandTrace) {
  const auto trace = make_trace({{0.5, 0}, {1.0, 1}, {2.0, 0}, {2.4, 1}}, 2, 3.0);
  const auto gt = small_block_increase(trace, 1.0, {1.0, 2.0});
  EXPECT_EQ(times_of(gt), (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(gt.guaranteed[0].effective_score, 2.0);
  EXPECT_EQ(gt.guaranteed[1].effective_score, 2.0);
  EXPECT_EQ(gt.guaranteed[0].type, 0u);  // original type preserved
  EXPECT_EQ(gt.total_score(), 4.0);
}

TEST(SmallBlockIncrease, WindowIsClosedAtTheEnd) {
  const auto trace = make_trace({{1.0, 0}, {2.0, 1}}, 2, 3.0);
  EXPECT_EQ(small_block_increase(trace, 1.0, {1.0, 5.0}).guaranteed[0].effective_score, 5.0);
  EXPECT_EQ(small_block_increase(trace, 0.999, {1.0, 5.0}).guaranteed[0].effective_score, 1.0);
}

TEST(SmallBlockIncrease, ZeroDelayAndSingleTypeLeaveScores) {
  const auto trace = generate_trace({2.0, 1.0}, 100.0, 4);
  const auto a = small_block_increase(trace, 0.0, {1.0, 2.0});
  const auto b = delta_interval_deletion(trace, 0.0, {1.0, 2.0});
  EXPECT_EQ(a.total_score(), b.total_score());

  const auto single = generate_trace({3.0}, 100.0, 4);
  const auto inc = small_block_increase(single, 1.0, {2.5});
  for (const auto& g : inc.guaranteed) EXPECT_EQ(g.effective_score, 2.5);
}

TEST(SmallBlockIncrease, ScoreRateConverges) {
  const double horizon = 1e4;
  const auto trace = generate_trace({2.0, 1.0}, horizon, 17);
  const auto gt = small_block_increase(trace, 0.5, {1.0, 2.0});
  const double expected = (1.0 * 2.0 * std::exp(-0.5) + 2.0 * (1.0 + (1.0 - std::exp(-0.5)) * 2.0)) / 2.5;
  EXPECT_NEAR(expected, 1.9148, 1e-4);
  EXPECT_NEAR(guaranteed_score_rate(gt, horizon), expected, 0.03 * expected);
}

TEST(GuaranteedScoreRate, EmptyIsZero) {
  EXPECT_EQ(guaranteed_score_rate(GuaranteedTrace{}, 10.0), 0.0);
  EXPECT_THROW(guaranteed_score_rate(GuaranteedTrace{}, 0.0), ValidationError);
}

// deletion ≤ fully delayed ≤ increase, trace by trace, and both processes pick
// the same guaranteed blocks.
TEST(OracleProperty, PerTraceSandwich) {
  std::mt19937_64 gen(1234);
  for (int rep = 0; rep < 100; ++rep) {
    const auto rc = support::random_config(gen, 1 + rep % 3);
    const auto trace = generate_trace(rc.h, 150.0, 77 + rep);
    const auto del = delta_interval_deletion(trace, rc.delta, rc.c);
    const auto inc = small_block_increase(trace, rc.delta, rc.c);
    ASSERT_EQ(times_of(del), times_of(inc));
    const auto tree = build_fully_delayed_tree(trace, rc.delta, rc.c);
    const double best = chain_score(tree, best_chain_tip(tree));
    EXPECT_LE(del.total_score(), best * (1 + 1e-12)) << "rep " << rep;
    EXPECT_LE(best, inc.total_score() * (1 + 1e-12)) << "rep " << rep;
  }
}
