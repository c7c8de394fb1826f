#include "unirank/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace unirank {

namespace {

constexpr double kRewardTolerance = 1e-12;

void require_ranked(std::span<const double> theta, std::size_t slots) {
  if (slots == 0 || slots > theta.size()) throw std::invalid_argument("gap report needs 1 <= K <= L");
  for (std::size_t k = 1; k < slots; ++k) {
    if (!(theta[k - 1] > theta[k])) {
      throw std::invalid_argument("gap report needs theta strictly decreasing on the top-K items");
    }
  }
  for (std::size_t j = slots; j < theta.size(); ++j) {
    if (!(theta[slots - 1] > theta[j])) {
      throw std::invalid_argument("gap report needs theta_K above every item outside the top K");
    }
  }
}

double click_lower_bound(std::span<const double> theta, std::size_t slots, std::size_t k) {
  const double best = theta[std::min(k - 1, slots) - 1];
  const double other = theta[k - 1];
  return (best - other) / (best + other);
}

void finalize(GapReport& report) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  report.min_ratio = inf;
  report.leading_coefficient = 0.0;
  for (const auto& g : report.items) {
    if (g.reward_gap == 0.0) continue;
    const double hardness = g.prob_difference * g.click_difference * g.click_difference;
    report.leading_coefficient += hardness > 0.0 ? 8.0 * g.reward_gap / hardness : inf;
    if (g.reward_gap > 0.0) report.min_ratio = std::min(report.min_ratio, hardness / g.reward_gap);
  }
}

// Item ranked r (one based) by attraction, ties by lower id.
std::vector<Item> ranking(const ClickModel& model) {
  std::vector<Item> order(model.num_items());
  std::iota(order.begin(), order.end(), Item{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Item a, Item b) { return model.attraction(a) > model.attraction(b); });
  return order;
}

std::string describe_pair(const Recommendation& rec, Item i, Item j) {
  return "a=" + rec.to_string() + " i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1);
}

void require_small(const ClickModel& model, std::size_t max_items, std::size_t max_slots,
                   CheckReport& report) {
  if (model.num_items() > max_items || model.num_slots() > max_slots) {
    report.applicable = false;
    report.notes.push_back("needs L <= " + std::to_string(max_items) + " and K <= " +
                           std::to_string(max_slots) + " for exhaustive enumeration");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Gap constants

GapReport gaps_pbm(std::span<const double> theta, std::span<const double> kappa) {
  const std::size_t slots = kappa.size();
  require_ranked(theta, slots);
  GapReport report;
  for (std::size_t k = 2; k <= theta.size(); ++k) {
    ItemGap g;
    g.rank = k;
    const double tk = theta[k - 1];
    if (k <= slots) {
      const double tp = theta[k - 2];
      const double kp = kappa[k - 2];
      const double kk = kappa[k - 1];
      g.prob_difference = 0.5 * (tp + tk) * (kp + kk) - 2.0 * tp * tk * kp * kk;
      g.reward_gap = (tp - tk) * (kp - kk);
    } else {
      const double tK = theta[slots - 1];
      const double kK = kappa[slots - 1];
      g.prob_difference = 0.5 * (tK + tk) * kK;
      g.reward_gap = (tK - tk) * kK;
    }
    g.click_difference = click_lower_bound(theta, slots, k);
    report.items.push_back(g);
  }
  finalize(report);
  return report;
}

GapReport gaps_cm(std::span<const double> theta, std::size_t slots) {
  require_ranked(theta, slots);
  auto survive = [&](std::size_t upto) {  // prod_{l <= upto} (1 - theta_l), one based
    double p = 1.0;
    for (std::size_t l = 1; l <= upto; ++l) p *= 1.0 - theta[l - 1];
    return p;
  };
  GapReport report;
  for (std::size_t k = 2; k <= theta.size(); ++k) {
    ItemGap g;
    g.rank = k;
    const double tk = theta[k - 1];
    if (k <= slots) {
      const double tp = theta[k - 2];
      g.prob_difference = (tp + tk - tp * tk) * survive(k - 2);
      g.reward_gap = 0.0;
    } else {
      const double tK = theta[slots - 1];
      g.prob_difference = 0.5 * (tK + tk) * survive(slots - 1);
      g.reward_gap = (tK - tk) * survive(slots - 1);
    }
    g.click_difference = click_lower_bound(theta, slots, k);
    report.items.push_back(g);
  }
  finalize(report);
  return report;
}

GapReport gaps_closed_form(const ClickModel& model) {
  if (model.kind() == ClickModelKind::kPbm) return gaps_pbm(model.attraction(), model.observation());
  return gaps_cm(model.attraction(), model.num_slots());
}

OrderedPartition optimal_partition(const ClickModel& model) {
  const auto order = ranking(model);
  const std::size_t slots = model.num_slots();
  std::vector<OrderedPartition::Subset> subsets;
  for (std::size_t k = 0; k < slots; ++k) subsets.push_back({order[k]});
  subsets.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(slots), order.end());
  return OrderedPartition(std::move(subsets), model.num_items());
}

GapReport gaps_enumerated(const ClickModel& model) {
  const auto order = ranking(model);
  std::vector<double> ranked_theta;
  for (Item item : order) ranked_theta.push_back(model.attraction(item));
  require_ranked(ranked_theta, model.num_slots());

  const std::size_t slots = model.num_slots();
  const auto best = optimal_reward(model);
  const auto star = optimal_partition(model);
  const auto neighbors = neighborhood(star);
  const auto everything = all_recommendations(model.num_items(), slots);

  GapReport report;
  for (std::size_t k = 2; k <= model.num_items(); ++k) {
    const Item l_item = order[std::min(k - 1, slots) - 1];
    const Item k_item = order[k - 1];
    ItemGap g;
    g.rank = k;

    g.prob_difference = std::numeric_limits<double>::infinity();
    for (const auto& nb : neighbors) {
      const auto& p = nb.partition;
      if (p.subset_of(l_item) != p.subset_of(k_item)) continue;
      const auto support = compatible_recommendations(p, slots);
      double differ = 0.0;
      for (const auto& rec : support) {
        const auto joint = pair_joint_enumerate(model, rec, l_item, k_item);
        differ += joint.p10 + joint.p01;
      }
      g.prob_difference = std::min(g.prob_difference, differ / static_cast<double>(support.size()));
    }

    g.click_difference = std::numeric_limits<double>::infinity();
    for (const auto& rec : everything) {
      if (!rec.displays(l_item) && !rec.displays(k_item)) continue;
      const auto diff = pair_diff_enumerate(model, rec, l_item, k_item);
      if (diff.expected_difference) g.click_difference = std::min(g.click_difference, *diff.expected_difference);
    }

    g.reward_gap = best.mu_star - expected_reward(model, swap_items(best.a_star, l_item, k_item));
    report.items.push_back(g);
  }
  finalize(report);
  return report;
}

double regret_upper_bound(const GapReport& report, std::uint64_t horizon) {
  if (horizon <= 1) return 0.0;
  if (report.leading_coefficient == 0.0) return 0.0;
  return report.leading_coefficient * std::log(static_cast<double>(horizon));
}

nlohmann::json to_json(const GapReport& report) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& g : report.items) {
    items.push_back({{"k", g.rank},
                     {"delta_tilde_star", g.prob_difference},
                     {"Delta_tilde", g.click_difference},
                     {"Delta", g.reward_gap}});
  }
  nlohmann::json doc{{"items", items}, {"leading_coefficient", report.leading_coefficient}};
  if (std::isfinite(report.min_ratio)) {
    doc["Delta"] = report.min_ratio;
  } else {
    doc["Delta"] = nullptr;
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Assumption checks

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json doc{{"name", report.name},
                     {"applicable", report.applicable},
                     {"passed", report.passed},
                     {"cases", report.cases},
                     {"notes", report.notes}};
  doc["counterexample"] = report.counterexample ? nlohmann::json(*report.counterexample) : nlohmann::json(nullptr);
  return doc;
}

CheckReport check_strict_top_k(const ClickModel& model) {
  CheckReport report;
  report.name = "strict_total_order_top_k";
  const auto order = ranking(model);
  const std::size_t slots = model.num_slots();
  for (std::size_t k = 0; k < slots; ++k) {
    for (Item j = 0; j < model.num_items(); ++j) {
      if (j == order[k]) continue;
      ++report.cases;
      if (model.attraction(j) == model.attraction(order[k])) {
        report.passed = false;
        if (!report.counterexample) {
          report.counterexample = "top-K item " + std::to_string(order[k] + 1) + " ties with item " +
                                  std::to_string(j + 1);
        }
      }
    }
  }
  return report;
}

CheckReport check_identifiability(const ClickModel& model, std::size_t max_items,
                                  std::size_t max_slots) {
  CheckReport report;
  report.name = "order_identifiability";
  require_small(model, max_items, max_slots, report);
  if (!report.applicable) return report;
  for (const auto& rec : all_recommendations(model.num_items(), model.num_slots())) {
    for (Item i = 0; i < model.num_items(); ++i) {
      for (Item j = 0; j < model.num_items(); ++j) {
        if (!(model.attraction(i) > model.attraction(j))) continue;
        if (!rec.displays(i) && !rec.displays(j)) continue;
        ++report.cases;
        const auto diff = pair_diff_enumerate(model, rec, i, j);
        std::string failure;
        if (!(diff.prob_difference > 0.0)) {
          failure = "probability of difference is 0";
        } else if (!(*diff.expected_difference > 0.0)) {
          failure = "expected click difference is not positive";
        }
        if (!failure.empty()) {
          report.passed = false;
          if (!report.counterexample) report.counterexample = failure + " for " + describe_pair(rec, i, j);
        }
      }
    }
  }
  return report;
}

CheckReport check_optimal_reward(const ClickModel& model, std::size_t max_items,
                                 std::size_t max_slots) {
  CheckReport report;
  report.name = "optimal_reward";
  require_small(model, max_items, max_slots, report);
  if (!report.applicable) return report;
  const auto everything = all_recommendations(model.num_items(), model.num_slots());
  double mu_max = -std::numeric_limits<double>::infinity();
  for (const auto& rec : everything) mu_max = std::max(mu_max, expected_reward(model, rec));

  const auto order = WeakOrder::from_scores(model.attraction());
  for (const auto& rec : everything) {
    if (!is_compatible(rec, order)) continue;
    ++report.cases;
    const double mu = expected_reward(model, rec);
    if (mu < mu_max - kRewardTolerance) {
      report.passed = false;
      if (!report.counterexample) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "compatible " << rec.to_string() << " earns " << mu << " < max " << mu_max;
        report.counterexample = msg.str();
      }
    }
  }
  const auto best = optimal_reward(model);
  if (std::abs(best.mu_star - mu_max) > kRewardTolerance) {
    report.passed = false;
    if (!report.counterexample) report.counterexample = "sorted recommendation " + best.a_star.to_string() + " is not optimal";
  }
  return report;
}

CheckReport check_pseudo_unimodality(const ClickModel& model, std::size_t max_items) {
  CheckReport report;
  report.name = "pseudo_unimodality";
  if (model.num_items() > max_items) {
    report.applicable = false;
    report.notes.push_back("needs L <= " + std::to_string(max_items));
    return report;
  }
  std::vector<double> sorted(model.attraction().begin(), model.attraction().end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    report.applicable = false;
    report.notes.push_back("needs pairwise distinct attractions (total order)");
    return report;
  }

  const auto star = optimal_partition(model);
  const auto theta = model.attraction();
  enumerate_ordered_partitions(
      model.num_items(),
      [&](const OrderedPartition& p) {
        if (p == star) return;
        ++report.cases;
        bool splittable = false;
        for (const auto& subset : p.subsets()) {
          if (subset.size() < 2) continue;
          std::vector<double> values;
          for (Item item : subset) values.push_back(theta[item]);
          std::partial_sort(values.begin(), values.begin() + 2, values.end(), std::greater<>());
          if (values[0] > values[1]) {
            splittable = true;
            break;
          }
        }
        bool inverted = false;
        for (std::size_t c = 0; c + 1 < p.size() && !inverted; ++c) {
          for (Item i : p[c]) {
            for (Item j : p[c + 1]) {
              if (theta[j] > theta[i]) inverted = true;
            }
          }
        }
        if (!splittable && !inverted) {
          report.passed = false;
          if (!report.counterexample) report.counterexample = "no defect detected in " + p.to_string();
        }
      },
      model.num_slots());
  return report;
}

}  // namespace unirank
