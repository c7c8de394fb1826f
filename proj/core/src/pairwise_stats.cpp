#include "unirank/pairwise_stats.hpp"

#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace unirank {

PairwiseStats::PairwiseStats(std::size_t num_items)
    : num_items_(num_items),
      diff_sum_(num_items * num_items, 0),
      diff_count_(num_items * num_items, 0),
      coloc_count_(num_items * num_items, 0) {}

void PairwiseStats::update(const OrderedPartition& played, const ClickVector& clicks) {
  if (played.num_items() != num_items_ || clicks.size() != num_items_) {
    throw std::invalid_argument("statistics update with mismatched item count");
  }
  for (const auto& subset : played.subsets()) {
    for (std::size_t a = 0; a < subset.size(); ++a) {
      const Item i = subset[a];
      const int ci = clicks.clicks[i];
      for (std::size_t b = a + 1; b < subset.size(); ++b) {
        const Item j = subset[b];
        ++coloc_count_[at(i, j)];
        ++coloc_count_[at(j, i)];
        const int cj = clicks.clicks[j];
        if (ci != cj) {
          ++diff_count_[at(i, j)];
          ++diff_count_[at(j, i)];
          diff_sum_[at(i, j)] += ci - cj;
          diff_sum_[at(j, i)] += cj - ci;
        }
      }
    }
  }
}

void PairwiseStats::record_leader(const OrderedPartition& leader) { ++leader_count_[leader.key()]; }

std::uint64_t PairwiseStats::leader_count(const OrderedPartition& leader) const {
  const auto it = leader_count_.find(leader.key());
  return it == leader_count_.end() ? 0 : it->second;
}

double PairwiseStats::mean_difference(Item i, Item j) const {
  const auto n = diff_count_[at(i, j)];
  if (n == 0) return 0.0;
  return static_cast<double>(diff_sum_[at(i, j)]) / static_cast<double>(n);
}

void PairwiseStats::assign_pair(Item i, Item j, std::int64_t diff_sum, std::uint64_t diff_count,
                                std::uint64_t coloc_count) {
  if (i >= num_items_ || j >= num_items_ || i == j) {
    throw std::invalid_argument("assign_pair needs two distinct items in range");
  }
  if (static_cast<std::uint64_t>(std::llabs(diff_sum)) > diff_count || diff_count > coloc_count) {
    throw std::invalid_argument("assign_pair requires |diff_sum| <= diff_count <= coloc_count");
  }
  diff_sum_[at(i, j)] = diff_sum;
  diff_sum_[at(j, i)] = -diff_sum;
  diff_count_[at(i, j)] = diff_count_[at(j, i)] = diff_count;
  coloc_count_[at(i, j)] = coloc_count_[at(j, i)] = coloc_count;
}

void PairwiseStats::write_csv(std::ostream& out) const {
  out << "matrix,i,j,value\n";
  for (Item i = 0; i < num_items_; ++i) {
    for (Item j = 0; j < num_items_; ++j) out << "s_hat," << i + 1 << ',' << j + 1 << ',' << mean_difference(i, j) << '\n';
  }
  for (Item i = 0; i < num_items_; ++i) {
    for (Item j = 0; j < num_items_; ++j) out << "diff_count," << i + 1 << ',' << j + 1 << ',' << diff_count(i, j) << '\n';
  }
  for (Item i = 0; i < num_items_; ++i) {
    for (Item j = 0; j < num_items_; ++j) out << "coloc_count," << i + 1 << ',' << j + 1 << ',' << coloc_count(i, j) << '\n';
  }
}

double optimistic_index(const PairwiseStats& stats, Item i, Item j, std::uint64_t t_leader,
                        const KlIndexParams& params, UnobservedIndex unobserved) {
  const auto n = stats.diff_count(i, j);
  if (n == 0) return unobserved == UnobservedIndex::kOptimistic ? 1.0 : -1.0;
  const double mu_hat = 0.5 * (1.0 + stats.mean_difference(i, j));
  return 2.0 * kl_ucb_upper(mu_hat, n, t_leader, params) - 1.0;
}

}  // namespace unirank
