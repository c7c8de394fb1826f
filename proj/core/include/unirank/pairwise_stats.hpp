#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "unirank/click_model.hpp"
#include "unirank/kl_index.hpp"
#include "unirank/partition.hpp"

namespace unirank {

/// What the optimistic index reports for a pair that has never been observed.
enum class UnobservedIndex {
  kPessimistic,  // -1, the f := 0 convention
  kOptimistic,   // +1, forces the comparison
};

/// Pairwise click-difference accumulators.
///
/// For items i, j co-located in the played partition:
///   coloc_count(i,j)  iterations where they shared a subset          (t_ij)
///   diff_count(i,j)   ... and their clicks differed                  (T_ij)
///   diff_sum(i,j)     sum of c_i - c_j over those iterations
/// diff_sum is antisymmetric, the counts symmetric, diagonals zero.
class PairwiseStats {
 public:
  explicit PairwiseStats(std::size_t num_items = 0);

  std::size_t num_items() const noexcept { return num_items_; }

  /// Folds one round of clicks observed while `played` was the played partition.
  void update(const OrderedPartition& played, const ClickVector& clicks);

  /// Counts one more iteration led by `leader`.
  void record_leader(const OrderedPartition& leader);
  /// Iterations previously led by `leader`.
  std::uint64_t leader_count(const OrderedPartition& leader) const;

  std::int64_t diff_sum(Item i, Item j) const { return diff_sum_[at(i, j)]; }
  std::uint64_t diff_count(Item i, Item j) const { return diff_count_[at(i, j)]; }
  std::uint64_t coloc_count(Item i, Item j) const { return coloc_count_[at(i, j)]; }

  /// Empirical mean of c_i - c_j given they differed; 0 when never observed.
  double mean_difference(Item i, Item j) const;

  /// Overwrites the accumulators of pair (i, j), keeping (j, i) consistent.
  /// Throws unless |diff_sum| <= diff_count <= coloc_count.
  void assign_pair(Item i, Item j, std::int64_t diff_sum, std::uint64_t diff_count,
                   std::uint64_t coloc_count);

  /// Writes "matrix,i,j,value" rows for s_hat, T and t (one-based items).
  void write_csv(std::ostream& out) const;

 private:
  std::size_t at(Item i, Item j) const { return i * num_items_ + j; }

  std::size_t num_items_ = 0;
  std::vector<std::int64_t> diff_sum_;
  std::vector<std::uint64_t> diff_count_;
  std::vector<std::uint64_t> coloc_count_;
  std::unordered_map<std::string, std::uint64_t> leader_count_;
};

/// Optimistic index of "i beats j":
///   2 f((1 + s_hat_ij) / 2, T_ij, t_leader) - 1
/// with f the KL-UCB upper bound. Pairs with T_ij = 0 get -1 (or +1 with
/// UnobservedIndex::kOptimistic).
double optimistic_index(const PairwiseStats& stats, Item i, Item j, std::uint64_t t_leader,
                        const KlIndexParams& params = {},
                        UnobservedIndex unobserved = UnobservedIndex::kPessimistic);

}  // namespace unirank
