#pragma once

// Fully-delayed honest chain construction and Monte Carlo estimation of the
// honest score growth rate.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mergedpow/arrivals.hpp"
#include "mergedpow/model.hpp"

namespace mergedpow {

struct GrowthEstimate {
  double mean_rate{0.0};  // points/second
  double std_error{0.0};  // points/second
  std::size_t trials{0};
  double horizon{0.0};
  double delta{0.0};
  std::uint64_t seed{0};

  friend bool operator==(const GrowthEstimate&, const GrowthEstimate&) = default;
};

// Every block is withheld from every other miner for exactly `delta`, and each
// block comes from a distinct miner. The block arriving at t therefore extends
// the best tip among blocks that arrived at or before t - delta.
//
// Blocks become visible in arrival order, so the best visible tip is kept
// incrementally; the result equals calling best_chain_tip(tree, t - delta)
// for each event.
inline BlockTree build_fully_delayed_tree(const ArrivalTrace& trace, double delta,
                                          const std::vector<double>& scores) {
  require(delta >= 0.0, "delta: must be nonnegative");
  require(scores.size() == trace.type_count(), "scores: one score per trace type is required");
  for (double c : scores) require(c > 0.0, "scores: must be positive");

  BlockTree tree;
  BlockId best_visible = kGenesisId;
  BlockId next_to_reveal = 1;  // block ids follow arrival order
  for (const auto& e : trace.events) {
    const double cutoff = e.time - delta;
    // Blocks sharing this event's timestamp stay hidden so parents are strictly earlier.
    while (next_to_reveal < tree.size() && tree.block(next_to_reveal).arrival_time <= cutoff &&
           tree.block(next_to_reveal).arrival_time < e.time) {
      if (better_tip(tree, next_to_reveal, best_visible)) best_visible = next_to_reveal;
      ++next_to_reveal;
    }
    tree.add(e.type, e.time, best_visible, scores[e.type]);
  }
  return tree;
}

// Final score of the best chain with every block visible, per second.
inline double fully_delayed_rate(const ArrivalTrace& trace, double delta,
                                 const std::vector<double>& scores) {
  const BlockTree tree = build_fully_delayed_tree(trace, delta, scores);
  return chain_score(tree, best_chain_tip(tree)) / trace.horizon;
}

// Sample mean and standard error of the mean.
inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Trial k uses the trace generated with seed + k.
inline GrowthEstimate estimate_growth_rate(const BlockrateConfiguration& config, double horizon,
                                           std::size_t trials, std::uint64_t seed) {
  require(horizon > 0.0, "horizon: must be positive");
  require(trials >= 1, "trials: must be at least 1");
  const auto rates = config.honest_rates();
  const auto scores = config.scores();
  std::vector<double> per_trial(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    const auto trace = generate_trace(rates, horizon, seed + k);
    per_trial[k] = fully_delayed_rate(trace, config.delta(), scores);
  }
  const auto [mean, se] = mean_and_stderr(per_trial);
  return {mean, se, trials, horizon, config.delta(), seed};
}

}  // namespace mergedpow
