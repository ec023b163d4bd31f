#pragma once

// Domain types for the multi-hash proof-of-work model: per-type blockrates and
// score constants, and the genesis-rooted block tree the fork-choice rule runs on.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mergedpow {

// Raised whenever an input violates a documented precondition. The message
// names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// One hash type. Indices are 1-based and contiguous inside a configuration.
struct BlockTypeSpec {
  std::size_t index{1};
  double score{1.0};           // points/block
  double honest_rate{0.0};     // blocks/second
  double adversary_rate{0.0};  // blocks/second
};

// Honest and adversary blockrate vectors plus the delay bound.
class BlockrateConfiguration {
 public:
  BlockrateConfiguration() = default;

  BlockrateConfiguration(std::vector<BlockTypeSpec> types, double delta)
      : types_(std::move(types)), delta_(delta) {
    validate();
  }

  // Convenience: parallel vectors, indices assigned 1..n.
  static BlockrateConfiguration from_vectors(const std::vector<double>& honest,
                                             const std::vector<double>& adversary,
                                             const std::vector<double>& scores,
                                             double delta) {
    require(!scores.empty(), "c: at least one block type is required");
    require(honest.size() == scores.size(), "h: length must match c");
    require(adversary.empty() || adversary.size() == scores.size(),
            "b: length must match c");
    std::vector<BlockTypeSpec> types;
    types.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      types.push_back({i + 1, scores[i], honest[i],
                       adversary.empty() ? 0.0 : adversary[i]});
    }
    return BlockrateConfiguration(std::move(types), delta);
  }

  const std::vector<BlockTypeSpec>& types() const { return types_; }
  std::size_t size() const { return types_.size(); }
  double delta() const { return delta_; }

  // Type accessors take 0-based positions.
  const BlockTypeSpec& type(std::size_t pos) const { return types_.at(pos); }

  std::vector<double> honest_rates() const { return column(&BlockTypeSpec::honest_rate); }
  std::vector<double> adversary_rates() const { return column(&BlockTypeSpec::adversary_rate); }
  std::vector<double> scores() const { return column(&BlockTypeSpec::score); }

  // Adversary share of type `pos`: b_i / (h_i + b_i).
  double beta(std::size_t pos) const {
    const auto& t = types_.at(pos);
    const double total = t.honest_rate + t.adversary_rate;
    require(total > 0.0, "beta: undefined when h_i + b_i = 0");
    return t.adversary_rate / total;
  }

  // Same scores and delay, honest and adversary rates exchanged.
  BlockrateConfiguration swapped() const {
    auto types = types_;
    for (auto& t : types) std::swap(t.honest_rate, t.adversary_rate);
    return BlockrateConfiguration(std::move(types), delta_);
  }

  BlockrateConfiguration with_delta(double delta) const {
    return BlockrateConfiguration(types_, delta);
  }

 private:
  void validate() const {
    require(!types_.empty(), "types: at least one block type is required");
    require(delta_ >= 0.0, "delta: must be nonnegative");
    for (std::size_t i = 0; i < types_.size(); ++i) {
      const auto& t = types_[i];
      const std::string tag = "type " + std::to_string(i + 1);
      require(t.index == i + 1, tag + ": indices must be contiguous from 1");
      require(t.score > 0.0, "c: score of " + tag + " must be positive");
      require(t.honest_rate >= 0.0, "h: rate of " + tag + " must be nonnegative");
      require(t.adversary_rate >= 0.0, "b: rate of " + tag + " must be nonnegative");
    }
  }

  std::vector<double> column(double BlockTypeSpec::*field) const {
    std::vector<double> out;
    out.reserve(types_.size());
    for (const auto& t : types_) out.push_back(t.*field);
    return out;
  }

  std::vector<BlockTypeSpec> types_;
  double delta_{0.0};
};

// Raw hashing resources for one type; blockrates follow as hashrate / difficulty.
struct HashResourceSpec {
  double hashrate_honest{0.0};     // hashes/second
  double hashrate_adversary{0.0};  // hashes/second
  double difficulty{1.0};          // hashes/block
  double cost_per_hash{0.0};       // dollars/hash

  void validate() const {
    require(difficulty > 0.0, "difficulty: must be positive");
    require(hashrate_honest >= 0.0, "hashrate_honest: must be nonnegative");
    require(hashrate_adversary >= 0.0, "hashrate_adversary: must be nonnegative");
    require(cost_per_hash >= 0.0, "cost_per_hash: must be nonnegative");
  }
  double honest_blockrate() const { validate(); return hashrate_honest / difficulty; }
  double adversary_blockrate() const { validate(); return hashrate_adversary / difficulty; }
};

using BlockId = std::size_t;
inline constexpr BlockId kGenesisId = 0;
inline constexpr double kAlwaysVisible = std::numeric_limits<double>::infinity();

struct Block {
  BlockId id{kGenesisId};
  std::size_t type{0};  // 0-based type position; meaningless for genesis
  double arrival_time{0.0};
  BlockId parent{kGenesisId};
  double score{0.0};
};

// Append-only block tree. Block ids are dense: genesis is 0 and each added
// block receives the next id.
class BlockTree {
 public:
  BlockTree() {
    blocks_.push_back(Block{});
    cumulative_.push_back(0.0);
  }

  BlockId add(std::size_t type, double arrival_time, BlockId parent, double score) {
    require(parent < blocks_.size(), "parent: unknown block id");
    require(score > 0.0, "score: block score must be positive");
    require(arrival_time > blocks_[parent].arrival_time,
            "arrival_time: must be later than the parent's");
    const BlockId id = blocks_.size();
    blocks_.push_back(Block{id, type, arrival_time, parent, score});
    cumulative_.push_back(cumulative_[parent] + score);
    return id;
  }

  std::size_t size() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(BlockId id) const {
    require(id < blocks_.size(), "block: unknown block id");
    return blocks_[id];
  }

  double cumulative_score(BlockId id) const {
    require(id < blocks_.size(), "chain_score: unknown tip id");
    return cumulative_[id];
  }

  // Ids from genesis (inclusive) to `tip` (inclusive).
  std::vector<BlockId> path_to(BlockId tip) const {
    require(tip < blocks_.size(), "path_to: unknown tip id");
    std::vector<BlockId> path;
    for (BlockId cur = tip;; cur = blocks_[cur].parent) {
      path.push_back(cur);
      if (cur == kGenesisId) break;
    }
    return {path.rbegin(), path.rend()};
  }

 private:
  std::vector<Block> blocks_;
  std::vector<double> cumulative_;
};

// Fork-choice ordering: true if `a` is a strictly better tip than `b`.
// Higher cumulative score wins, then earlier arrival, then smaller id.
inline bool better_tip(const BlockTree& tree, BlockId a, BlockId b) {
  const double sa = tree.cumulative_score(a);
  const double sb = tree.cumulative_score(b);
  if (sa != sb) return sa > sb;
  const double ta = tree.block(a).arrival_time;
  const double tb = tree.block(b).arrival_time;
  if (ta != tb) return ta < tb;
  return a < b;
}

// Highest-score tip among blocks that arrived at or before `visible_before`.
inline BlockId best_chain_tip(const BlockTree& tree, double visible_before = kAlwaysVisible) {
  require(visible_before >= 0.0, "visible_before: must be nonnegative");
  BlockId best = kGenesisId;
  for (const auto& b : tree.blocks()) {
    if (b.id == kGenesisId || b.arrival_time > visible_before) continue;
    if (better_tip(tree, b.id, best)) best = b.id;
  }
  return best;
}

inline double chain_score(const BlockTree& tree, BlockId tip) {
  return tree.cumulative_score(tip);
}

}  // namespace mergedpow
