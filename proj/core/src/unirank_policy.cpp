#include "unirank/unirank_policy.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

namespace unirank {

namespace {

bool beats(const PairwiseStats& stats, Item i, Item j) { return stats.diff_sum(i, j) > 0; }

}  // namespace

OrderedPartition elect_leader(const PairwiseStats& stats, std::size_t slots) {
  const std::size_t num_items = stats.num_items();
  std::vector<Item> remaining(num_items);
  std::iota(remaining.begin(), remaining.end(), Item{0});

  std::vector<OrderedPartition::Subset> subsets;
  std::size_t covered = 0;
  std::vector<std::size_t> wins(num_items, 0);

  while (covered < slots && !remaining.empty()) {
    for (Item i : remaining) {
      wins[i] = 0;
      for (Item j : remaining) {
        if (i != j && beats(stats, i, j)) ++wins[i];
      }
    }
    std::stable_sort(remaining.begin(), remaining.end(),
                     [&](Item a, Item b) { return wins[a] > wins[b]; });

    // Shortest prefix beating every remaining item outside it; the whole of R
    // when no strict prefix qualifies.
    const std::size_t n = remaining.size();
    std::size_t prefix = n;
    for (std::size_t m = 1; m < n; ++m) {
      // Each prefix item must beat the n - m others at least.
      if (wins[remaining[m - 1]] < n - m) continue;
      bool dominates = true;
      for (std::size_t a = 0; a < m && dominates; ++a) {
        for (std::size_t b = m; b < n; ++b) {
          if (!beats(stats, remaining[a], remaining[b])) {
            dominates = false;
            break;
          }
        }
      }
      if (dominates) {
        prefix = m;
        break;
      }
    }

    subsets.emplace_back(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(prefix));
    remaining.erase(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(prefix));
    std::sort(remaining.begin(), remaining.end());
    covered += prefix;
  }
  subsets.push_back(std::move(remaining));
  return OrderedPartition(std::move(subsets), num_items);
}

PartitionChoice select_partition(const OrderedPartition& leader, const PairwiseStats& stats,
                                 std::uint64_t t_leader, const UniRankConfig& config) {
  PartitionChoice choice;
  choice.chosen = leader;
  choice.scores.push_back({leader, 0.0});
  double best = 0.0;
  for (auto& neighbor : neighborhood(leader)) {
    double score = -1.0;
    for (const auto& [i, j] : neighbor.index_pairs) {
      score = std::max(score, optimistic_index(stats, j, i, t_leader, config.index, config.unobserved));
    }
    if (score > best) {
      best = score;
      choice.chosen = neighbor.partition;
      choice.chosen_rank = choice.scores.size();
    }
    choice.scores.push_back({std::move(neighbor.partition), score});
  }
  return choice;
}

UniRankPolicy::UniRankPolicy(std::size_t num_items, std::size_t slots, UniRankConfig config)
    : num_items_(num_items), slots_(slots), config_(config), stats_(num_items) {
  if (slots_ == 0 || slots_ > num_items_) {
    throw std::invalid_argument("unirank needs 1 <= K <= L");
  }
}

Recommendation UniRankPolicy::do_step(Rng& rng) {
  ++iteration_;
  OrderedPartition leader = elect_leader(stats_, slots_);
  const std::uint64_t t_leader = stats_.leader_count(leader);
  stats_.record_leader(leader);
  PartitionChoice choice = select_partition(leader, stats_, t_leader, config_);
  Recommendation rec = compatible_sample(choice.chosen, slots_, rng);
  last_leader_ = std::move(leader);
  last_played_ = std::move(choice.chosen);
  last_recommendation_ = rec;
  return rec;
}

void UniRankPolicy::do_feedback(const ClickVector& clicks) {
  stats_.update(*last_played_, clicks);
  if (trace_ != nullptr) {
    nlohmann::json line;
    line["iteration"] = iteration_;
    line["leader"] = last_leader_->key();
    line["chosen"] = last_played_->key();
    std::vector<std::size_t> shown;
    for (Item item : last_recommendation_->items()) shown.push_back(item + 1);
    line["recommendation"] = shown;
    std::vector<std::size_t> clicked;
    for (Item item = 0; item < clicks.size(); ++item) {
      if (clicks.clicked(item)) clicked.push_back(item + 1);
    }
    line["clicks"] = clicked;
    *trace_ << line.dump() << '\n';
  }
}

}  // namespace unirank
