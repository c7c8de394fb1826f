#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unirank/click_model.hpp"
#include "unirank/random.hpp"

namespace unirank {

/// Ordered partition (P_1, ..., P_d) of the items [0, L).
///
/// Items inside each subset are kept ascending, so two partitions holding the
/// same sets compare equal and share the same key(). Only the last subset may
/// be empty; it is kept so that d matches the leader's indexing.
class OrderedPartition {
 public:
  using Subset = std::vector<Item>;

  OrderedPartition() = default;
  /// Sorts each subset; throws std::invalid_argument unless the subsets are
  /// disjoint, cover [0, num_items) and only the last one is empty.
  OrderedPartition(std::vector<Subset> subsets, std::size_t num_items);

  /// Parses the textual form produced by to_string(), e.g. "({1,2}|{3}|{})".
  static OrderedPartition parse(std::string_view text, std::size_t num_items);

  const std::vector<Subset>& subsets() const noexcept { return subsets_; }
  const Subset& operator[](std::size_t c) const { return subsets_[c]; }
  /// d
  std::size_t size() const noexcept { return subsets_.size(); }
  std::size_t num_items() const noexcept { return num_items_; }

  /// Index of the subset holding `item`.
  std::size_t subset_of(Item item) const;

  /// Σ_{c<=d-2} |P_c| < K <= Σ_{c<=d-1} |P_c|, i.e. the last subset is exactly
  /// the set of items no compatible recommendation displays.
  bool has_leader_shape(std::size_t slots) const noexcept;

  /// One-based rendering "({1,2}|{3}|{4,5}|{6,7})"; doubles as the canonical key.
  std::string to_string() const;
  const std::string& key() const noexcept { return key_; }

  friend bool operator==(const OrderedPartition& a, const OrderedPartition& b) {
    return a.key_ == b.key_;
  }

 private:
  std::vector<Subset> subsets_;
  std::size_t num_items_ = 0;
  std::string key_;
};

/// Neighbor of a leader partition.
struct NeighborDescriptor {
  enum class Kind { kMerge, kAddItem };

  Kind kind = Kind::kMerge;
  /// Zero-based c for merges of P_c and P_{c+1}; the promoted item for add-item.
  std::size_t which = 0;
  OrderedPartition partition;
  /// Pairs (i, j); the neighbor's optimistic index is the max over them of
  /// the index of "j beats i".
  std::vector<std::pair<Item, Item>> index_pairs;
};

/// Merges of consecutive subsets P_c, P_{c+1} for c in [d-2] (ascending c),
/// then promotion of each j in P_d into P_{d-1} (ascending j).
std::vector<NeighborDescriptor> neighborhood(const OrderedPartition& p);

/// Concatenates an independent uniform permutation of each subset and keeps
/// the first `slots` positions. Throws when the partition holds fewer items
/// than `slots`.
Recommendation compatible_sample(const OrderedPartition& p, std::size_t slots, Rng& rng);

/// Every recommendation compatible with `p` (the support of compatible_sample).
std::vector<Recommendation> compatible_recommendations(const OrderedPartition& p,
                                                       std::size_t slots);

/// Every ordered K-permutation of [0, L).
std::vector<Recommendation> all_recommendations(std::size_t num_items, std::size_t slots);

/// Largest L accepted by enumerate_ordered_partitions.
inline constexpr std::size_t kMaxEnumeratedItems = 8;

/// Calls `visit` once per ordered partition of [0, L) without empty subsets.
/// With `leader_shape_slots` set, visits instead every partition with leader
/// shape for that K (these may end with an empty subset).
/// Throws std::invalid_argument when L > kMaxEnumeratedItems.
void enumerate_ordered_partitions(std::size_t num_items,
                                  const std::function<void(const OrderedPartition&)>& visit,
                                  std::size_t leader_shape_slots = 0);

/// Strict weak order given as ranked classes of equivalent items, most
/// attractive first.
class WeakOrder {
 public:
  WeakOrder(const std::vector<std::vector<Item>>& classes, std::size_t num_items);
  /// Higher score is more attractive, equal scores are equivalent.
  static WeakOrder from_scores(std::span<const double> scores);

  std::size_t rank(Item item) const { return rank_[item]; }
  /// i ≻ j
  bool prefers(Item i, Item j) const { return rank_[i] < rank_[j]; }
  bool equivalent(Item i, Item j) const { return rank_[i] == rank_[j]; }
  std::size_t num_items() const noexcept { return rank_.size(); }

 private:
  WeakOrder() = default;
  std::vector<std::size_t> rank_;
};

/// Consecutive displayed items never improve, and a_K weakly dominates every
/// undisplayed item.
bool is_compatible(const Recommendation& rec, const WeakOrder& order);

}  // namespace unirank
