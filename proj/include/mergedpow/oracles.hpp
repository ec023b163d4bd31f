#pragma once

// Per-trace constructions bracketing the fully-delayed honest chain:
//   - interval deletion: the first arrival after each Δ window becomes a
//     guaranteed block and everything else in (g, g + Δ] is dropped;
//   - small block increase: same guaranteed blocks, each raised to the largest
//     score arriving in [g, g + Δ].
// Guaranteed blocks always form a single chain, so their score totals bound
// the best fully-delayed chain from below and above.

#include <algorithm>
#include <vector>

#include "mergedpow/arrivals.hpp"

namespace mergedpow {

struct GuaranteedBlock {
  double time{0.0};
  std::size_t type{0};
  double effective_score{0.0};
};

struct GuaranteedTrace {
  std::vector<GuaranteedBlock> guaranteed;
  std::vector<std::size_t> per_type_counts;
  double delta{0.0};

  double total_score() const {
    double s = 0.0;
    for (const auto& g : guaranteed) s += g.effective_score;
    return s;
  }
};

namespace detail {

// Positions (into trace.events) of guaranteed arrivals.
inline std::vector<std::size_t> guaranteed_positions(const ArrivalTrace& trace, double delta) {
  require(delta >= 0.0, "delta: must be nonnegative");
  std::vector<std::size_t> out;
  bool have = false;
  double window_end = 0.0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const double t = trace.events[i].time;
    if (have && t <= window_end) continue;
    out.push_back(i);
    have = true;
    window_end = t + delta;
  }
  return out;
}

inline GuaranteedTrace collect(const ArrivalTrace& trace, double delta,
                               const std::vector<std::size_t>& positions,
                               const std::vector<double>& effective) {
  GuaranteedTrace gt;
  gt.delta = delta;
  gt.per_type_counts.assign(trace.type_count(), 0);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const auto& e = trace.events[positions[k]];
    gt.guaranteed.push_back({e.time, e.type, effective[k]});
    ++gt.per_type_counts.at(e.type);
  }
  return gt;
}

inline void check_scores(const ArrivalTrace& trace, const std::vector<double>& scores) {
  require(scores.size() == trace.type_count(), "scores: one score per trace type is required");
  for (double c : scores) require(c > 0.0, "scores: must be positive");
}

}  // namespace detail

inline GuaranteedTrace delta_interval_deletion(const ArrivalTrace& trace, double delta,
                                               const std::vector<double>& scores) {
  detail::check_scores(trace, scores);
  const auto pos = detail::guaranteed_positions(trace, delta);
  std::vector<double> eff;
  eff.reserve(pos.size());
  for (auto i : pos) eff.push_back(scores[trace.events[i].type]);
  return detail::collect(trace, delta, pos, eff);
}

// Unit scores; useful when only block counts matter.
inline GuaranteedTrace delta_interval_deletion(const ArrivalTrace& trace, double delta) {
  return delta_interval_deletion(trace, delta, std::vector<double>(trace.type_count(), 1.0));
}

// The window scan covers every arrival in [g, g + Δ], deleted or not.
inline GuaranteedTrace small_block_increase(const ArrivalTrace& trace, double delta,
                                            const std::vector<double>& scores) {
  detail::check_scores(trace, scores);
  const auto pos = detail::guaranteed_positions(trace, delta);
  std::vector<double> eff;
  eff.reserve(pos.size());
  const auto& ev = trace.events;
  for (auto i : pos) {
    const double end = ev[i].time + delta;
    double best = scores[ev[i].type];
    for (std::size_t j = i + 1; j < ev.size() && ev[j].time <= end; ++j)
      best = std::max(best, scores[ev[j].type]);
    eff.push_back(best);
  }
  return detail::collect(trace, delta, pos, eff);
}

inline double guaranteed_score_rate(const GuaranteedTrace& gt, double horizon) {
  require(horizon > 0.0, "horizon: must be positive");
  return gt.total_score() / horizon;
}

}  // namespace mergedpow
