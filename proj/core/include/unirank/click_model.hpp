#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "unirank/random.hpp"

namespace unirank {

/// Item identifier. Zero based in the API; rendered one based in text.
using Item = std::size_t;

enum class ClickModelKind { kPbm, kCm };

std::string_view to_string(ClickModelKind kind);

/// An ordered slate of K distinct items. Position k holds items()[k].
class Recommendation {
 public:
  Recommendation() = default;
  /// Throws std::invalid_argument on duplicates or ids >= num_items.
  Recommendation(std::vector<Item> items, std::size_t num_items);

  std::span<const Item> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  Item operator[](std::size_t position) const { return items_[position]; }

  /// Position of `item`, or nullopt when it is not displayed.
  std::optional<std::size_t> position_of(Item item) const noexcept;
  bool displays(Item item) const noexcept { return position_of(item).has_value(); }

  /// One-based rendering, e.g. "(2,1,3,5)".
  std::string to_string() const;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
  friend auto operator<=>(const Recommendation&, const Recommendation&) = default;

 private:
  std::vector<Item> items_;
};

/// Per-item click indicators for one round. Undisplayed items are always 0.
struct ClickVector {
  std::vector<std::uint8_t> clicks;

  std::size_t size() const noexcept { return clicks.size(); }
  bool clicked(Item item) const { return clicks[item] != 0; }
  std::size_t total() const noexcept;

  friend bool operator==(const ClickVector&, const ClickVector&) = default;
};

/// Position-based (PBM) or cascading (CM) user simulator.
///
/// Construction rejects malformed parameters (sizes, values outside [0,1],
/// zero attraction). Parameters that are well formed but break a modelling
/// assumption are accepted and reported by warnings(), so that the theory
/// checkers can be run on counterexamples:
///  - PBM observation probabilities that are zero or not non-increasing;
///  - CM attraction probabilities equal to 1.
class ClickModel {
 public:
  static ClickModel pbm(std::vector<double> theta, std::vector<double> kappa);
  static ClickModel cm(std::vector<double> theta, std::size_t slots);

  ClickModelKind kind() const noexcept { return kind_; }
  /// L
  std::size_t num_items() const noexcept { return theta_.size(); }
  /// K
  std::size_t num_slots() const noexcept { return slots_; }

  std::span<const double> attraction() const noexcept { return theta_; }
  /// Empty for CM.
  std::span<const double> observation() const noexcept { return kappa_; }
  double attraction(Item item) const { return theta_[item]; }

  std::vector<std::string> warnings() const;

  /// Same model restricted to the first `items` items and `slots` positions.
  ClickModel truncated(std::size_t items, std::size_t slots) const;

  /// Throws std::invalid_argument when `rec` does not fit this model.
  void validate(const Recommendation& rec) const;

  friend bool operator==(const ClickModel&, const ClickModel&) = default;

 private:
  ClickModel(ClickModelKind kind, std::vector<double> theta, std::vector<double> kappa,
             std::size_t slots);

  ClickModelKind kind_ = ClickModelKind::kPbm;
  std::vector<double> theta_;
  std::vector<double> kappa_;
  std::size_t slots_ = 0;
};

/// Parses {"kind": "pbm"|"cm", "theta": [...], "kappa": [...], "K": int}.
/// K is optional for PBM, where it defaults to kappa.size().
/// Errors are std::invalid_argument naming the offending field.
ClickModel click_model_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ClickModel& model);
ClickModel load_click_model(const std::string& path);

ClickVector sample_clicks(const ClickModel& model, const Recommendation& rec, Rng& rng);

/// Exact expected number of clicks of `rec`.
double expected_reward(const ClickModel& model, const Recommendation& rec);

struct OptimalRecommendation {
  double mu_star = 0.0;
  Recommendation a_star;
};

/// Top-K items by attraction (ties by lower id), placed in that order.
OptimalRecommendation optimal_reward(const ClickModel& model);

/// (i,j)∘a: swaps i and j when both are displayed, substitutes the displayed
/// one by the other otherwise, and leaves `rec` untouched when neither is.
Recommendation swap_items(const Recommendation& rec, Item i, Item j);

/// Probability that c_i and c_j differ, and the conditional expectation of
/// c_i - c_j given they differ, under a draw uniform in {a, (i,j)∘a}.
/// expected_difference is nullopt when prob_difference is 0.
struct PairDifference {
  double prob_difference = 0.0;
  std::optional<double> expected_difference;
};

/// Exact joint law of (c_i, c_j) for one fixed recommendation.
struct PairJoint {
  double p10 = 0.0;  // c_i = 1, c_j = 0
  double p01 = 0.0;  // c_i = 0, c_j = 1
  double p11 = 0.0;
  double p00 = 0.0;
};

/// Enumerates the click outcomes of `rec` (4 joint values under PBM, the
/// K + 1 cascade stops under CM).
PairJoint pair_joint_enumerate(const ClickModel& model, const Recommendation& rec, Item i,
                               Item j);

/// Mixture of pair_joint_enumerate over {a, (i,j)∘a}.
PairDifference pair_diff_enumerate(const ClickModel& model, const Recommendation& rec, Item i,
                                   Item j);

/// Closed forms. With e_k the probability that position k is examined once
/// the items other than i and j are accounted for (kappa_k under PBM, the
/// product of (1 - theta) of the other items above k under CM, 0 when the
/// position is not displayed):
///   numerator   = (e_k + e_l) (theta_i - theta_j) / 2
///   PBM: delta  = (theta_i + theta_j)(e_k + e_l) / 2 - 2 theta_i theta_j e_k e_l
///   CM:  delta  = (theta_i + theta_j)(e_first + e_second) / 2
///                 - theta_i theta_j e_second
PairDifference pair_diff_analytic(const ClickModel& model, const Recommendation& rec, Item i,
                                  Item j);

}  // namespace unirank
