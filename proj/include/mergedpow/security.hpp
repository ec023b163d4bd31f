#pragma once

// Security classification against the bound pair, private-mining attack races,
// and the hardware-backdoor binomial tail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mergedpow/arrivals.hpp"
#include "mergedpow/bounds.hpp"
#include "mergedpow/chainsim.hpp"

namespace mergedpow {

enum class Verdict { SecureByBound, InsecureByBound, Indeterminate };

// Outcome of comparing λ_a against a simulated λ_h when the bounds alone do not decide.
enum class RefinedVerdict { LikelySecure, LikelyInsecure, Unresolved };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::SecureByBound: return "SecureByBound";
    case Verdict::InsecureByBound: return "InsecureByBound";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

inline std::string to_string(RefinedVerdict v) {
  switch (v) {
    case RefinedVerdict::LikelySecure: return "LikelySecure";
    case RefinedVerdict::LikelyInsecure: return "LikelyInsecure";
    case RefinedVerdict::Unresolved: return "Unresolved";
  }
  return "?";
}

struct SecurityVerdict {
  Verdict verdict{Verdict::Indeterminate};
  double lambda_a{0.0};
  BoundPair bounds;
  std::optional<GrowthEstimate> simulated;
  std::optional<RefinedVerdict> refined;
};

// Settings for the optional simulation pass on Indeterminate configurations.
struct RefinementSettings {
  double horizon{1000.0};
  std::size_t trials{20};
  std::uint64_t seed{1};
  double z{3.0};  // two-sided half-width in standard errors
};

inline SecurityVerdict classify(const BlockrateConfiguration& config,
                                const std::optional<RefinementSettings>& refine = std::nullopt) {
  SecurityVerdict out;
  out.lambda_a = adversary_rate(config);
  out.bounds = bound_pair(config);
  if (out.lambda_a < out.bounds.lower)
    out.verdict = Verdict::SecureByBound;
  else if (out.lambda_a > out.bounds.upper)
    out.verdict = Verdict::InsecureByBound;
  else
    out.verdict = Verdict::Indeterminate;

  if (refine && out.verdict == Verdict::Indeterminate) {
    require(refine->z > 0.0, "z: must be positive");
    const auto est = estimate_growth_rate(config, refine->horizon, refine->trials, refine->seed);
    out.simulated = est;
    const double half = refine->z * est.std_error;
    if (out.lambda_a < est.mean_rate - half)
      out.refined = RefinedVerdict::LikelySecure;
    else if (out.lambda_a > est.mean_rate + half)
      out.refined = RefinedVerdict::LikelyInsecure;
    else
      out.refined = RefinedVerdict::Unresolved;
  }
  return out;
}

struct AttackRaceResult {
  std::size_t trials{0};
  std::size_t adversary_wins{0};
  double win_fraction{0.0};
  double horizon{0.0};
  double reveal_time{0.0};

  friend bool operator==(const AttackRaceResult&, const AttackRaceResult&) = default;
};

// Score of the adversary's private chain at `t`: it mines undelayed on its own
// tip, so every arrival extends the chain.
inline double private_chain_score(const ArrivalTrace& trace, const std::vector<double>& scores,
                                  double t) {
  double s = 0.0;
  for (const auto& e : trace.events) {
    if (e.time > t) break;
    s += scores.at(e.type);
  }
  return s;
}

// Honest simulation attack: the adversary mines a private chain with its own
// rates and publishes it at `reveal_time`. A trial is won when the private
// score strictly exceeds the honest best-chain score at that moment.
// Trial k draws the honest trace from stream 2k and the adversary trace from
// stream 2k + 1 of `seed`.
inline AttackRaceResult simulate_private_attack(const BlockrateConfiguration& config,
                                                double horizon, double reveal_time,
                                                std::size_t trials, std::uint64_t seed) {
  require(horizon > 0.0, "horizon: must be positive");
  require(reveal_time > 0.0 && reveal_time <= horizon, "reveal_time: must lie in (0, horizon]");
  require(trials >= 1, "trials: must be at least 1");
  const auto scores = config.scores();
  const auto h = config.honest_rates();
  const auto b = config.adversary_rates();

  AttackRaceResult out{trials, 0, 0.0, horizon, reveal_time};
  for (std::size_t k = 0; k < trials; ++k) {
    // Only arrivals up to the reveal matter for the comparison.
    const auto honest = generate_trace(h, reveal_time, mix_seed(seed, 2 * k));
    const auto adversary = generate_trace(b, reveal_time, mix_seed(seed, 2 * k + 1));
    const BlockTree tree = build_fully_delayed_tree(honest, config.delta(), scores);
    const double honest_score = chain_score(tree, best_chain_tip(tree, reveal_time));
    if (private_chain_score(adversary, scores, reveal_time) > honest_score) ++out.adversary_wins;
  }
  out.win_fraction = static_cast<double>(out.adversary_wins) / static_cast<double>(trials);
  return out;
}

// P(Binomial(n, p) ≥ ⌈n/2⌉) by direct summation of the pmf. Coefficients are
// exact doubles for moderate n; larger n switches to log space.
inline double backdoor_insecurity_probability(std::size_t n, double p) {
  require(n >= 1, "n: must be at least 1");
  require(p >= 0.0 && p <= 1.0, "p: must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const std::size_t threshold = (n + 1) / 2;
  const double q = 1.0 - p;
  double total = 0.0;
  if (n <= 1000) {
    double choose = 1.0;  // C(n, k)
    for (std::size_t k = 0; k <= n; ++k) {
      if (k > 0) choose = choose * static_cast<double>(n - k + 1) / static_cast<double>(k);
      if (k >= threshold)
        total += choose * std::pow(p, static_cast<double>(k)) * std::pow(q, static_cast<double>(n - k));
    }
  } else {
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (std::size_t k = threshold; k <= n; ++k) {
      const double log_choose =
          std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      total += std::exp(log_choose + static_cast<double>(k) * lp + static_cast<double>(n - k) * lq);
    }
  }
  return std::min(total, 1.0);
}

struct BackdoorEstimate {
  double probability{0.0};
  double std_error{0.0};
  std::size_t trials{0};
};

// Samples n independent hack events per trial; a trial counts when at least
// ⌈n/2⌉ types are compromised.
inline BackdoorEstimate backdoor_monte_carlo(std::size_t n, double p, std::size_t trials,
                                             std::uint64_t seed) {
  require(n >= 1, "n: must be at least 1");
  require(p >= 0.0 && p <= 1.0, "p: must lie in [0, 1]");
  require(trials >= 1, "trials: must be at least 1");
  const std::size_t threshold = (n + 1) / 2;
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t hacked = 0;
    for (std::size_t i = 0; i < n; ++i) hacked += rng.bernoulli(p) ? 1 : 0;
    if (hacked >= threshold) ++hits;
  }
  const double est = static_cast<double>(hits) / static_cast<double>(trials);
  return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(trials)), trials};
}

}  // namespace mergedpow
