#include "unirank/click_model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace unirank {

namespace {

std::invalid_argument field_error(std::string_view field, std::string_view what) {
  return std::invalid_argument("field '" + std::string(field) + "': " + std::string(what));
}

void check_probabilities(std::span<const double> values, std::string_view field, bool allow_zero) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    const bool ok = allow_zero ? (v >= 0.0 && v <= 1.0) : (v > 0.0 && v <= 1.0);
    if (!ok) {
      throw field_error(field, "entry " + std::to_string(k) + " = " + std::to_string(v) +
                                   (allow_zero ? " is outside [0,1]" : " is outside (0,1]"));
    }
  }
}

}  // namespace

std::string_view to_string(ClickModelKind kind) {
  return kind == ClickModelKind::kPbm ? "pbm" : "cm";
}

// ---------------------------------------------------------------------------
// Recommendation / ClickVector

Recommendation::Recommendation(std::vector<Item> items, std::size_t num_items)
    : items_(std::move(items)) {
  std::vector<bool> seen(num_items, false);
  for (Item item : items_) {
    if (item >= num_items) {
      throw std::invalid_argument("recommendation item " + std::to_string(item + 1) +
                                  " is outside [1," + std::to_string(num_items) + "]");
    }
    if (seen[item]) {
      throw std::invalid_argument("recommendation repeats item " + std::to_string(item + 1));
    }
    seen[item] = true;
  }
}

std::optional<std::size_t> Recommendation::position_of(Item item) const noexcept {
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (items_[k] == item) return k;
  }
  return std::nullopt;
}

std::string Recommendation::to_string() const {
  std::string out = "(";
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(items_[k] + 1);
  }
  out += ')';
  return out;
}

std::size_t ClickVector::total() const noexcept {
  return static_cast<std::size_t>(std::count(clicks.begin(), clicks.end(), std::uint8_t{1}));
}

// ---------------------------------------------------------------------------
// ClickModel

ClickModel::ClickModel(ClickModelKind kind, std::vector<double> theta, std::vector<double> kappa,
                       std::size_t slots)
    : kind_(kind), theta_(std::move(theta)), kappa_(std::move(kappa)), slots_(slots) {
  if (theta_.empty()) throw field_error("theta", "must list at least one item");
  if (slots_ == 0) throw field_error("K", "must be at least 1");
  if (slots_ > theta_.size()) {
    throw field_error("K", "K = " + std::to_string(slots_) + " exceeds the number of items L = " +
                               std::to_string(theta_.size()));
  }
  check_probabilities(theta_, "theta", /*allow_zero=*/false);
  if (kind_ == ClickModelKind::kPbm) {
    if (kappa_.size() != slots_) {
      throw field_error("kappa", "expected K = " + std::to_string(slots_) + " entries, got " +
                                     std::to_string(kappa_.size()));
    }
    check_probabilities(kappa_, "kappa", /*allow_zero=*/true);
  } else if (!kappa_.empty()) {
    throw field_error("kappa", "not used by the cascading model");
  }
}

ClickModel ClickModel::pbm(std::vector<double> theta, std::vector<double> kappa) {
  const std::size_t slots = kappa.size();
  return ClickModel(ClickModelKind::kPbm, std::move(theta), std::move(kappa), slots);
}

ClickModel ClickModel::cm(std::vector<double> theta, std::size_t slots) {
  return ClickModel(ClickModelKind::kCm, std::move(theta), {}, slots);
}

std::vector<std::string> ClickModel::warnings() const {
  std::vector<std::string> out;
  if (kind_ == ClickModelKind::kPbm) {
    for (std::size_t k = 0; k < kappa_.size(); ++k) {
      if (kappa_[k] == 0.0) {
        out.push_back("kappa[" + std::to_string(k + 1) + "] is 0: position never observed");
      }
    }
    for (std::size_t k = 1; k < kappa_.size(); ++k) {
      if (kappa_[k] > kappa_[k - 1]) {
        out.push_back("kappa is not non-increasing at position " + std::to_string(k + 1));
        break;
      }
    }
  } else {
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      if (theta_[i] == 1.0) {
        out.push_back("theta[" + std::to_string(i + 1) +
                      "] is 1: cascade always stops there, difference oracles degenerate");
      }
    }
  }
  return out;
}

ClickModel ClickModel::truncated(std::size_t items, std::size_t slots) const {
  if (items == 0 || items > theta_.size()) {
    throw std::invalid_argument("truncation to " + std::to_string(items) + " items out of range");
  }
  if (slots == 0 || slots > slots_ || slots > items) {
    throw std::invalid_argument("truncation to " + std::to_string(slots) + " slots out of range");
  }
  std::vector<double> theta(theta_.begin(), theta_.begin() + static_cast<std::ptrdiff_t>(items));
  if (kind_ == ClickModelKind::kPbm) {
    std::vector<double> kappa(kappa_.begin(), kappa_.begin() + static_cast<std::ptrdiff_t>(slots));
    return pbm(std::move(theta), std::move(kappa));
  }
  return cm(std::move(theta), slots);
}

void ClickModel::validate(const Recommendation& rec) const {
  if (rec.size() != slots_) {
    throw std::invalid_argument("recommendation has " + std::to_string(rec.size()) +
                                " items, model expects K = " + std::to_string(slots_));
  }
  for (Item item : rec.items()) {
    if (item >= theta_.size()) {
      throw std::invalid_argument("recommendation item " + std::to_string(item + 1) +
                                  " exceeds L = " + std::to_string(theta_.size()));
    }
  }
}

// ---------------------------------------------------------------------------
// JSON

ClickModel click_model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("model: expected a JSON object");

  auto require = [&](const char* field) -> const nlohmann::json& {
    auto it = doc.find(field);
    if (it == doc.end()) throw field_error(field, "missing");
    return *it;
  };
  auto numbers = [&](const char* field) {
    const auto& node = require(field);
    if (!node.is_array()) throw field_error(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
      if (!v.is_number()) throw field_error(field, "expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };

  const auto& kind_node = require("kind");
  if (!kind_node.is_string()) throw field_error("kind", "expected \"pbm\" or \"cm\"");
  const auto kind = kind_node.get<std::string>();
  auto theta = numbers("theta");

  auto read_slots = [&] {
    const auto& k_node = require("K");
    if (!k_node.is_number_integer() || k_node.get<long long>() < 1) {
      throw field_error("K", "expected a positive integer");
    }
    return static_cast<std::size_t>(k_node.get<long long>());
  };

  if (kind == "pbm") {
    auto kappa = numbers("kappa");
    // K defaults to the length of kappa.
    const std::size_t slots = doc.contains("K") ? read_slots() : kappa.size();
    if (kappa.size() != slots) {
      throw field_error("kappa", "expected K = " + std::to_string(slots) + " entries, got " +
                                     std::to_string(kappa.size()));
    }
    return ClickModel::pbm(std::move(theta), std::move(kappa));
  }
  if (kind == "cm") {
    if (doc.contains("kappa")) throw field_error("kappa", "not used by the cascading model");
    return ClickModel::cm(std::move(theta), read_slots());
  }
  throw field_error("kind", "unknown click model \"" + kind + "\" (expected pbm or cm)");
}

nlohmann::json to_json(const ClickModel& model) {
  nlohmann::json doc;
  doc["kind"] = std::string(to_string(model.kind()));
  doc["theta"] = std::vector<double>(model.attraction().begin(), model.attraction().end());
  if (model.kind() == ClickModelKind::kPbm) {
    doc["kappa"] = std::vector<double>(model.observation().begin(), model.observation().end());
  }
  doc["K"] = model.num_slots();
  return doc;
}

ClickModel load_click_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("model file '" + path + "': " + e.what());
  }
  return click_model_from_json(doc);
}

// ---------------------------------------------------------------------------
// Simulation

ClickVector sample_clicks(const ClickModel& model, const Recommendation& rec, Rng& rng) {
  model.validate(rec);
  ClickVector out{std::vector<std::uint8_t>(model.num_items(), 0)};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (model.kind() == ClickModelKind::kPbm) {
    const auto kappa = model.observation();
    for (std::size_t k = 0; k < rec.size(); ++k) {
      const bool looked = unit(rng) < kappa[k];
      const bool clicked = unit(rng) < model.attraction(rec[k]);
      out.clicks[rec[k]] = (looked && clicked) ? 1 : 0;
    }
  } else {
    for (std::size_t k = 0; k < rec.size(); ++k) {
      if (unit(rng) < model.attraction(rec[k])) {
        out.clicks[rec[k]] = 1;
        break;
      }
    }
  }
  return out;
}

double expected_reward(const ClickModel& model, const Recommendation& rec) {
  model.validate(rec);
  if (model.kind() == ClickModelKind::kPbm) {
    const auto kappa = model.observation();
    double mu = 0.0;
    for (std::size_t k = 0; k < rec.size(); ++k) mu += kappa[k] * model.attraction(rec[k]);
    return mu;
  }
  double no_click = 1.0;
  for (Item item : rec.items()) no_click *= 1.0 - model.attraction(item);
  return 1.0 - no_click;
}

OptimalRecommendation optimal_reward(const ClickModel& model) {
  std::vector<Item> order(model.num_items());
  std::iota(order.begin(), order.end(), Item{0});
  std::stable_sort(order.begin(), order.end(), [&](Item a, Item b) {
    return model.attraction(a) > model.attraction(b);
  });
  order.resize(model.num_slots());
  Recommendation best(std::move(order), model.num_items());
  const double mu = expected_reward(model, best);
  return {mu, std::move(best)};
}

Recommendation swap_items(const Recommendation& rec, Item i, Item j) {
  std::vector<Item> items(rec.items().begin(), rec.items().end());
  const auto pi = rec.position_of(i);
  const auto pj = rec.position_of(j);
  if (pi) items[*pi] = j;
  if (pj) items[*pj] = i;
  Item bound = 0;
  for (Item item : items) bound = std::max(bound, item + 1);
  return Recommendation(std::move(items), bound);
}

// ---------------------------------------------------------------------------
// Pairwise click differences

PairJoint pair_joint_enumerate(const ClickModel& model, const Recommendation& rec, Item i,
                               Item j) {
  model.validate(rec);
  PairJoint joint;
  if (model.kind() == ClickModelKind::kPbm) {
    const auto kappa = model.observation();
    auto click_prob = [&](Item item) {
      const auto pos = rec.position_of(item);
      return pos ? kappa[*pos] * model.attraction(item) : 0.0;
    };
    const double pi = click_prob(i);
    const double pj = click_prob(j);
    // Independent clicks: enumerate the four joint values.
    for (int ci = 0; ci <= 1; ++ci) {
      for (int cj = 0; cj <= 1; ++cj) {
        const double p = (ci ? pi : 1.0 - pi) * (cj ? pj : 1.0 - pj);
        if (ci && cj) joint.p11 += p;
        else if (ci) joint.p10 += p;
        else if (cj) joint.p01 += p;
        else joint.p00 += p;
      }
    }
    return joint;
  }

  // Cascade: stop at position k with probability theta_{a_k} prod_{p<k}(1 - theta_{a_p}),
  // or scan everything without clicking.
  double reach = 1.0;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const double theta = model.attraction(rec[k]);
    const double stop = reach * theta;
    if (rec[k] == i) joint.p10 += stop;
    else if (rec[k] == j) joint.p01 += stop;
    else joint.p00 += stop;
    reach *= 1.0 - theta;
  }
  joint.p00 += reach;
  return joint;
}

PairDifference pair_diff_enumerate(const ClickModel& model, const Recommendation& rec, Item i,
                                   Item j) {
  if (i == j) throw std::invalid_argument("pair difference requires two distinct items");
  if (i >= model.num_items() || j >= model.num_items()) {
    throw std::invalid_argument("pair difference item outside the model");
  }
  const PairJoint a = pair_joint_enumerate(model, rec, i, j);
  const PairJoint b = pair_joint_enumerate(model, swap_items(rec, i, j), i, j);
  const double p10 = 0.5 * (a.p10 + b.p10);
  const double p01 = 0.5 * (a.p01 + b.p01);
  PairDifference out;
  out.prob_difference = p10 + p01;
  if (out.prob_difference > 0.0) out.expected_difference = (p10 - p01) / out.prob_difference;
  return out;
}

PairDifference pair_diff_analytic(const ClickModel& model, const Recommendation& rec, Item i,
                                  Item j) {
  if (i == j) throw std::invalid_argument("pair difference requires two distinct items");
  if (i >= model.num_items() || j >= model.num_items()) {
    throw std::invalid_argument("pair difference item outside the model");
  }
  model.validate(rec);
  const double ti = model.attraction(i);
  const double tj = model.attraction(j);
  const auto pos_i = rec.position_of(i);
  const auto pos_j = rec.position_of(j);

  double numerator = 0.0;
  double delta = 0.0;
  if (model.kind() == ClickModelKind::kPbm) {
    const auto kappa = model.observation();
    const double kk = pos_i ? kappa[*pos_i] : 0.0;
    const double kl = pos_j ? kappa[*pos_j] : 0.0;
    numerator = 0.5 * (kk + kl) * (ti - tj);
    delta = 0.5 * (ti + tj) * (kk + kl) - 2.0 * ti * tj * kk * kl;
  } else {
    // Examination probability of each displayed slot of the pair, ignoring i and j
    // themselves (they trade places between the two mixed recommendations).
    std::optional<std::size_t> first;
    std::optional<std::size_t> second;
    if (pos_i && pos_j) {
      first = std::min(*pos_i, *pos_j);
      second = std::max(*pos_i, *pos_j);
    } else {
      first = pos_i ? pos_i : pos_j;
    }
    auto examined = [&](std::optional<std::size_t> pos) {
      if (!pos) return 0.0;
      double e = 1.0;
      for (std::size_t p = 0; p < *pos; ++p) {
        if (rec[p] != i && rec[p] != j) e *= 1.0 - model.attraction(rec[p]);
      }
      return e;
    };
    const double e_first = examined(first);
    const double e_second = examined(second);
    numerator = 0.5 * (e_first + e_second) * (ti - tj);
    delta = 0.5 * (e_first + e_second) * (ti + tj) - e_second * ti * tj;
  }

  PairDifference out;
  out.prob_difference = std::max(0.0, delta);
  if (out.prob_difference > 0.0) out.expected_difference = numerator / out.prob_difference;
  return out;
}

}  // namespace unirank
