#pragma once

// Closed-form bounds on the fully-delayed honest score growth rate.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mergedpow/model.hpp"

namespace mergedpow {

// Lower/upper bound with the intermediates of the upper-bound construction.
// Intermediates are indexed by ascending-score rank (`order[k]` is the
// 0-based type position holding rank k).
struct BoundPair {
  double lower{0.0};
  double upper{0.0};
  double zero_delay{0.0};
  std::vector<std::size_t> order;
  std::vector<double> rho;                // guaranteed blocks/second per rank
  std::vector<std::vector<double>> p_up;  // p_up[x][y], x < y: raised from rank x to rank y
  std::vector<double> p_stay;             // probability a rank keeps its own score
  std::vector<double> r;                  // blocks/second at each score after raising
};

inline double zero_delay_rate(const BlockrateConfiguration& config) {
  double s = 0.0;
  for (const auto& t : config.types()) s += t.score * t.honest_rate;
  return s;
}

inline double adversary_rate(const BlockrateConfiguration& config) {
  double s = 0.0;
  for (const auto& t : config.types()) s += t.score * t.adversary_rate;
  return s;
}

inline double total_honest_rate(const BlockrateConfiguration& config) {
  double s = 0.0;
  for (const auto& t : config.types()) s += t.honest_rate;
  return s;
}

// Σ c_i ρ_i with ρ_i = h_i / (1 + Δ Σ h_k). Summed per type in index order so
// that Δ = 0 reproduces zero_delay_rate bit for bit.
inline double lower_bound(const BlockrateConfiguration& config) {
  const double denom = 1.0 + config.delta() * total_honest_rate(config);
  double s = 0.0;
  for (const auto& t : config.types()) s += t.score * (t.honest_rate / denom);
  return s;
}

inline BoundPair bound_pair(const BlockrateConfiguration& config) {
  const std::size_t n = config.size();
  const double delta = config.delta();
  BoundPair bp;
  bp.zero_delay = zero_delay_rate(config);
  bp.lower = lower_bound(config);

  bp.order.resize(n);
  std::iota(bp.order.begin(), bp.order.end(), std::size_t{0});
  std::stable_sort(bp.order.begin(), bp.order.end(), [&](std::size_t a, std::size_t b) {
    return config.type(a).score < config.type(b).score;
  });
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = config.type(bp.order[k]).honest_rate;
  }

  const double denom = 1.0 + delta * total_honest_rate(config);
  bp.rho.resize(n);
  for (std::size_t k = 0; k < n; ++k) bp.rho[k] = h[k] / denom;  // same expression as lower_bound

  // no_arrival_above[k] = ∏_{j>k} e^{-h_j Δ}
  std::vector<double> no_arrival_above(n, 1.0);
  for (std::size_t k = n - 1; k-- > 0;)
    no_arrival_above[k] = no_arrival_above[k + 1] * std::exp(-h[k + 1] * delta);

  bp.p_stay = no_arrival_above;
  bp.p_up.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      bp.p_up[x][y] = -std::expm1(-h[y] * delta) * no_arrival_above[y];

  bp.r.assign(n, 0.0);
  std::vector<double> r_by_type(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double rk = bp.p_stay[k] * bp.rho[k];
    for (std::size_t x = 0; x < k; ++x) rk += bp.p_up[x][k] * bp.rho[x];
    bp.r[k] = rk;
    r_by_type[bp.order[k]] = rk;
  }
  // Index order again, matching lower_bound's summation.
  bp.upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) bp.upper += config.type(i).score * r_by_type[i];
  return bp;
}

inline double upper_bound(const BlockrateConfiguration& config) {
  return bound_pair(config).upper;
}

}  // namespace mergedpow
