#pragma once

// Linear cost-per-hash attack economics and difficulty setting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mergedpow/model.hpp"
#include "mergedpow/rng.hpp"

namespace mergedpow {

struct PriceVector {
  std::vector<double> prices;  // dollars/block, aligned with type positions

  PriceVector() = default;
  explicit PriceVector(std::vector<double> p) : prices(std::move(p)) { validate(); }

  void validate() const {
    require(!prices.empty(), "prices: at least one price is required");
    for (double p : prices) require(p > 0.0, "prices: all prices must be positive");
  }
  std::size_t size() const { return prices.size(); }
};

struct AttackCost {
  double cost{0.0};                 // dollars/second
  std::vector<double> allocation;   // adversary blocks/second per type
  std::size_t cheapest{0};          // 0-based type carrying the allocation
};

// Zero-delay attack: the adversary needs Σ c_j b_j to match Σ c_j h_j and pays
// Σ p_j b_j. The optimum puts everything on the type with the smallest p/c
// (smallest index on ties).
inline AttackCost min_attack_cost(const std::vector<double>& h, const std::vector<double>& c,
                                  const PriceVector& prices) {
  prices.validate();
  const std::size_t n = c.size();
  require(n >= 1, "c: at least one block type is required");
  require(h.size() == n, "h: length must match c");
  require(prices.size() == n, "prices: length must match c");
  double honest_score_rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    require(c[i] > 0.0, "c: scores must be positive");
    require(h[i] >= 0.0, "h: rates must be nonnegative");
    honest_score_rate += c[i] * h[i];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (prices.prices[i] / c[i] < prices.prices[best] / c[best]) best = i;

  AttackCost out;
  out.cheapest = best;
  out.allocation.assign(n, 0.0);
  out.allocation[best] = honest_score_rate / c[best];
  out.cost = prices.prices[best] / c[best] * honest_score_rate;
  return out;
}

// c_i = c1 · p_i / p_1, which equalizes p_i / c_i across types.
inline std::vector<double> optimal_score_constants(const PriceVector& prices, double c1) {
  prices.validate();
  require(c1 > 0.0, "c1: must be positive");
  std::vector<double> c;
  c.reserve(prices.size());
  for (double p : prices.prices) c.push_back(c1 * p / prices.prices.front());
  return c;
}

// d_i = d1 · κ_1 / κ_i, equalizing the cost per block d_i κ_i.
inline std::vector<double> relative_difficulty(double d1, const std::vector<double>& kappas) {
  require(d1 > 0.0, "d1: must be positive");
  require(!kappas.empty(), "kappa: at least one cost per hash is required");
  for (double k : kappas) require(k > 0.0, "kappa: costs per hash must be positive");
  std::vector<double> d;
  d.reserve(kappas.size());
  for (double k : kappas) d.push_back(d1 * kappas.front() / k);
  // The first entry is d1 exactly so that d_1 κ_1 is the reference product.
  d.front() = d1;
  return d;
}

// Multiplies one type's cost per hash by `factor` from `epoch` onward.
struct CostShock {
  std::size_t epoch{0};
  std::size_t type{0};  // 0-based
  double factor{1.0};
};

struct AdjustmentParams {
  double epoch_length{1e4};  // seconds
  double min_fraction{0.1};
  double step_down{0.05};
  double block_reward{1.0};            // dollars/block
  std::vector<double> difficulties;    // hashes/block
  std::vector<double> cost_per_hash;   // dollars/hash
  std::vector<double> hashrates;       // hashes/second, initial
  double elasticity{0.0};              // hashes/second added per dollar/second of margin
  std::size_t epochs{100};
  std::vector<CostShock> shocks;

  std::size_t type_count() const { return difficulties.size(); }

  void validate() const {
    const std::size_t n = difficulties.size();
    require(n >= 1, "d: at least one block type is required");
    require(cost_per_hash.size() == n, "kappa: length must match d");
    require(hashrates.size() == n, "q: length must match d");
    require(epoch_length > 0.0, "epoch_length: must be positive");
    require(min_fraction > 0.0 && min_fraction < 1.0 / static_cast<double>(n),
            "min_fraction: must lie in (0, 1/n)");
    require(step_down > 0.0 && step_down < 1.0, "step_down: must lie in (0, 1)");
    require(block_reward >= 0.0, "reward: must be nonnegative");
    require(elasticity >= 0.0, "elasticity: must be nonnegative");
    require(epochs >= 1, "epochs: must be at least 1");
    for (double d : difficulties) require(d > 0.0, "d: difficulties must be positive");
    for (double k : cost_per_hash) require(k >= 0.0, "kappa: costs per hash must be nonnegative");
    for (double q : hashrates) require(q >= 0.0, "q: hashrates must be nonnegative");
    for (const auto& s : shocks) {
      require(s.type < n, "shock: type index out of range");
      require(s.factor > 0.0, "shock: factor must be positive");
    }
  }
};

// State in force during one epoch, plus what was observed in it.
struct EpochRecord {
  std::size_t epoch{0};
  std::vector<double> difficulties;
  std::vector<double> cost_per_hash;
  std::vector<double> hashrates;
  std::vector<std::uint64_t> blocks;
  std::vector<double> fractions;
  std::vector<bool> adjusted;  // difficulty lowered at the end of this epoch

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

// Minimum-fraction difficulty adjustment under a linear entry/exit response.
// Each epoch: block counts are Poisson(q_i / d_i · epoch_length); types whose
// share of blocks is below min_fraction get d_i ← d_i (1 − step_down); then
// each hashrate moves by elasticity · ((q_i / d_i) · reward − q_i κ_i), floored
// at zero. An epoch with no blocks at all counts every share as zero.
//
// Block counts come from std::poisson_distribution, so series are reproducible
// for a fixed seed within one build of the standard library.
inline std::vector<EpochRecord> simulate_difficulty_adjustment(const AdjustmentParams& params,
                                                               std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.type_count();
  std::vector<double> d = params.difficulties;
  std::vector<double> kappa = params.cost_per_hash;
  std::vector<double> q = params.hashrates;
  Rng rng(seed);

  std::vector<EpochRecord> series;
  series.reserve(params.epochs);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& s : params.shocks)
      if (s.epoch == epoch) kappa[s.type] *= s.factor;

    EpochRecord rec;
    rec.epoch = epoch;
    rec.difficulties = d;
    rec.cost_per_hash = kappa;
    rec.hashrates = q;
    rec.blocks.assign(n, 0);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = q[i] / d[i] * params.epoch_length;
      if (mean > 0.0) {
        std::poisson_distribution<std::uint64_t> pois(mean);
        rec.blocks[i] = pois(rng.engine());
      }
      total += rec.blocks[i];
    }
    rec.fractions.assign(n, 0.0);
    if (total > 0)
      for (std::size_t i = 0; i < n; ++i)
        rec.fractions[i] = static_cast<double>(rec.blocks[i]) / static_cast<double>(total);

    rec.adjusted.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (rec.fractions[i] < params.min_fraction) {
        d[i] *= 1.0 - params.step_down;
        rec.adjusted[i] = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double margin = q[i] / d[i] * params.block_reward - q[i] * kappa[i];
      q[i] = std::max(0.0, q[i] + params.elasticity * margin);
    }
    series.push_back(std::move(rec));
  }
  return series;
}

}  // namespace mergedpow
