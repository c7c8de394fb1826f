#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unirank/kl_index.hpp"
#include "unirank/pairwise_stats.hpp"
#include "unirank/partition.hpp"
#include "unirank/policy.hpp"

namespace unirank {

/// Builds the leader partition from the signs of s_hat.
///
/// Repeatedly ranks the remaining items R by how many remaining items they
/// beat (s_hat > 0; ties by lower id), emits the shortest non-empty prefix
/// that beats every other remaining item (all of R when none does), and stops
/// once the emitted subsets hold at least K items. The leftover items form
/// the last subset, which may be empty.
OrderedPartition elect_leader(const PairwiseStats& stats, std::size_t slots);

struct NeighborScore {
  OrderedPartition partition;
  double index = 0.0;
};

struct PartitionChoice {
  OrderedPartition chosen;
  /// Index of the chosen entry in `scores`; 0 is the leader.
  std::size_t chosen_rank = 0;
  /// Leader first (index 0), then neighbors in neighborhood() order.
  std::vector<NeighborScore> scores;
};

struct UniRankConfig {
  KlIndexParams index;
  UnobservedIndex unobserved = UnobservedIndex::kPessimistic;
};

/// Argmax of the optimistic indices over the leader and its neighborhood.
/// The leader scores 0; a neighbor scores the max of the index of "j beats i"
/// over its index pairs. Ties keep the earliest candidate.
PartitionChoice select_partition(const OrderedPartition& leader, const PairwiseStats& stats,
                                 std::uint64_t t_leader, const UniRankConfig& config = {});

class UniRankPolicy final : public Policy {
 public:
  UniRankPolicy(std::size_t num_items, std::size_t slots, UniRankConfig config = {});

  std::string name() const override { return "unirank"; }
  std::optional<OrderedPartition> current_leader() const override { return last_leader_; }

  const PairwiseStats& stats() const noexcept { return stats_; }
  /// Mutable access for seeding fixtures.
  PairwiseStats& mutable_stats() noexcept { return stats_; }
  const std::optional<OrderedPartition>& last_leader() const noexcept { return last_leader_; }
  const std::optional<OrderedPartition>& last_played() const noexcept { return last_played_; }
  std::uint64_t iteration() const noexcept { return iteration_; }

  /// Emits one JSON line per round: iteration, leader, chosen, recommendation, clicks.
  void set_trace(std::ostream* sink) noexcept { trace_ = sink; }

 protected:
  Recommendation do_step(Rng& rng) override;
  void do_feedback(const ClickVector& clicks) override;

 private:
  std::size_t num_items_;
  std::size_t slots_;
  UniRankConfig config_;
  PairwiseStats stats_;
  std::optional<OrderedPartition> last_leader_;
  std::optional<OrderedPartition> last_played_;
  std::optional<Recommendation> last_recommendation_;
  std::uint64_t iteration_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace unirank
