#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unirank/click_model.hpp"
#include "unirank/partition.hpp"

namespace unirank {

/// Gap constants of the item ranked k (k >= 2, one based), compared against
/// item l = min(k - 1, K).
struct ItemGap {
  std::size_t rank = 0;
  /// Smallest probability that c_l != c_k over the neighbors of the optimal
  /// partition putting l and k in the same subset.
  double prob_difference = 0.0;
  /// Lower bound (closed forms) or exact minimum (enumeration) of the
  /// expected click difference between l and k.
  double click_difference = 0.0;
  /// Reward lost by swapping l and k in the optimal recommendation.
  double reward_gap = 0.0;
};

struct GapReport {
  std::vector<ItemGap> items;  // ranks 2..L
  /// min over ranks with a positive reward gap of prob * click^2 / reward_gap;
  /// +inf when every reward gap is 0.
  double min_ratio = 0.0;
  /// Σ_k 8 reward_gap / (prob_difference * click_difference^2).
  double leading_coefficient = 0.0;
};

/// Closed forms for the cascading model. `theta` must be ranked: strictly
/// decreasing on the first K entries and theta_K above every later entry.
GapReport gaps_cm(std::span<const double> theta, std::size_t slots);
/// Closed forms for the position-based model (K = kappa.size()).
GapReport gaps_pbm(std::span<const double> theta, std::span<const double> kappa);
/// Dispatches on the model kind.
GapReport gaps_closed_form(const ClickModel& model);
/// Same constants recomputed by exhaustive enumeration of recommendations.
/// click_difference is the exact minimum, which the closed forms lower-bound.
GapReport gaps_enumerated(const ClickModel& model);

/// Leading log T term of the regret upper bound: leading_coefficient * log T.
double regret_upper_bound(const GapReport& report, std::uint64_t horizon);

nlohmann::json to_json(const GapReport& report);

/// Outcome of one assumption check.
struct CheckReport {
  std::string name;
  /// False when a precondition is unmet and the check did not run.
  bool applicable = true;
  bool passed = true;
  std::size_t cases = 0;
  std::optional<std::string> counterexample;
  std::vector<std::string> notes;
};

nlohmann::json to_json(const CheckReport& report);

/// Top-K items strictly ordered by attraction and strictly above the rest.
CheckReport check_strict_top_k(const ClickModel& model);

/// For every pair with theta_i > theta_j and every recommendation showing at
/// least one of them: prob_difference != 0 and expected_difference > 0.
CheckReport check_identifiability(const ClickModel& model, std::size_t max_items = 6,
                                  std::size_t max_slots = 4);

/// Every recommendation compatible with the attraction order attains the
/// maximal expected reward over all recommendations.
CheckReport check_optimal_reward(const ClickModel& model, std::size_t max_items = 6,
                                 std::size_t max_slots = 4);

/// Every leader-shaped partition other than the optimal one either holds a
/// subset whose best item strictly beats the runner-up, or has an adjacent
/// pair (i in P_c, j in P_{c+1}) with j more attractive than i.
/// Requires pairwise distinct attractions.
CheckReport check_pseudo_unimodality(const ClickModel& model, std::size_t max_items = 5);

/// ({a*_1}, ..., {a*_K}, rest) for the model's optimal recommendation.
OrderedPartition optimal_partition(const ClickModel& model);

}  // namespace unirank
