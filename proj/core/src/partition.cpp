#include "unirank/partition.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace unirank {

// ---------------------------------------------------------------------------
// OrderedPartition

OrderedPartition::OrderedPartition(std::vector<Subset> subsets, std::size_t num_items)
    : subsets_(std::move(subsets)), num_items_(num_items) {
  if (subsets_.empty()) throw std::invalid_argument("ordered partition needs at least one subset");
  std::vector<bool> seen(num_items_, false);
  std::size_t covered = 0;
  for (std::size_t c = 0; c < subsets_.size(); ++c) {
    auto& subset = subsets_[c];
    if (subset.empty() && c + 1 != subsets_.size()) {
      throw std::invalid_argument("only the last subset of an ordered partition may be empty");
    }
    std::sort(subset.begin(), subset.end());
    for (Item item : subset) {
      if (item >= num_items_) {
        throw std::invalid_argument("partition item " + std::to_string(item + 1) +
                                    " is outside [1," + std::to_string(num_items_) + "]");
      }
      if (seen[item]) {
        throw std::invalid_argument("partition subsets overlap on item " +
                                    std::to_string(item + 1));
      }
      seen[item] = true;
      ++covered;
    }
  }
  if (covered != num_items_) {
    throw std::invalid_argument("partition covers " + std::to_string(covered) + " of " +
                                std::to_string(num_items_) + " items");
  }
  key_ = to_string();
}

OrderedPartition OrderedPartition::parse(std::string_view text, std::size_t num_items) {
  std::vector<Subset> subsets;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c) {
      throw std::invalid_argument("cannot parse partition '" + std::string(text) + "': expected '" +
                                  std::string(1, c) + "' at offset " + std::to_string(pos));
    }
    ++pos;
  };
  expect('(');
  while (true) {
    expect('{');
    Subset subset;
    skip_space();
    while (pos < text.size() && text[pos] != '}') {
      std::size_t value = 0;
      std::size_t digits = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
        ++pos;
        ++digits;
      }
      if (digits == 0 || value == 0) {
        throw std::invalid_argument("cannot parse partition '" + std::string(text) +
                                    "': bad item at offset " + std::to_string(pos));
      }
      subset.push_back(value - 1);
      skip_space();
      if (pos < text.size() && text[pos] == ',') ++pos;
      skip_space();
    }
    expect('}');
    subsets.push_back(std::move(subset));
    skip_space();
    if (pos < text.size() && text[pos] == '|') {
      ++pos;
      continue;
    }
    break;
  }
  expect(')');
  return OrderedPartition(std::move(subsets), num_items);
}

std::size_t OrderedPartition::subset_of(Item item) const {
  for (std::size_t c = 0; c < subsets_.size(); ++c) {
    if (std::binary_search(subsets_[c].begin(), subsets_[c].end(), item)) return c;
  }
  throw std::invalid_argument("item " + std::to_string(item + 1) + " is not in the partition");
}

bool OrderedPartition::has_leader_shape(std::size_t slots) const noexcept {
  const std::size_t d = subsets_.size();
  if (d < 2) return false;
  std::size_t before_last_two = 0;
  for (std::size_t c = 0; c + 2 < d; ++c) before_last_two += subsets_[c].size();
  const std::size_t before_last = before_last_two + subsets_[d - 2].size();
  return before_last_two < slots && slots <= before_last;
}

std::string OrderedPartition::to_string() const {
  std::string out = "(";
  for (std::size_t c = 0; c < subsets_.size(); ++c) {
    if (c > 0) out += '|';
    out += '{';
    for (std::size_t n = 0; n < subsets_[c].size(); ++n) {
      if (n > 0) out += ',';
      out += std::to_string(subsets_[c][n] + 1);
    }
    out += '}';
  }
  out += ')';
  return out;
}

// ---------------------------------------------------------------------------
// Neighborhood

std::vector<NeighborDescriptor> neighborhood(const OrderedPartition& p) {
  const auto& subsets = p.subsets();
  const std::size_t d = subsets.size();
  std::vector<NeighborDescriptor> out;
  if (d < 2) return out;

  for (std::size_t c = 0; c + 2 < d; ++c) {
    std::vector<OrderedPartition::Subset> merged;
    merged.reserve(d - 1);
    for (std::size_t n = 0; n < d; ++n) {
      if (n == c + 1) continue;
      merged.push_back(subsets[n]);
      if (n == c) {
        merged.back().insert(merged.back().end(), subsets[c + 1].begin(), subsets[c + 1].end());
      }
    }
    NeighborDescriptor nb;
    nb.kind = NeighborDescriptor::Kind::kMerge;
    nb.which = c;
    nb.partition = OrderedPartition(std::move(merged), p.num_items());
    for (Item i : subsets[c]) {
      for (Item j : subsets[c + 1]) nb.index_pairs.emplace_back(i, j);
    }
    out.push_back(std::move(nb));
  }

  for (Item j : subsets[d - 1]) {
    auto moved = subsets;
    moved[d - 2].push_back(j);
    std::erase(moved[d - 1], j);
    NeighborDescriptor nb;
    nb.kind = NeighborDescriptor::Kind::kAddItem;
    nb.which = j;
    nb.partition = OrderedPartition(std::move(moved), p.num_items());
    for (Item i : subsets[d - 2]) nb.index_pairs.emplace_back(i, j);
    out.push_back(std::move(nb));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compatible recommendations

Recommendation compatible_sample(const OrderedPartition& p, std::size_t slots, Rng& rng) {
  if (slots > p.num_items()) {
    throw std::invalid_argument("partition of " + std::to_string(p.num_items()) +
                                " items cannot fill " + std::to_string(slots) + " positions");
  }
  std::vector<Item> out;
  out.reserve(slots);
  for (const auto& subset : p.subsets()) {
    if (out.size() == slots) break;
    std::vector<Item> pool = subset;
    const std::size_t take = std::min(slots - out.size(), pool.size());
    // Partial Fisher-Yates: the first `take` entries form a uniform ordered sample.
    for (std::size_t n = 0; n < take; ++n) {
      std::uniform_int_distribution<std::size_t> pick(n, pool.size() - 1);
      std::swap(pool[n], pool[pick(rng)]);
      out.push_back(pool[n]);
    }
  }
  return Recommendation(std::move(out), p.num_items());
}

namespace {

// Appends every ordered selection of `take` items from `pool` to each prefix.
void extend_ordered(const std::vector<std::vector<Item>>& prefixes, const std::vector<Item>& pool,
                    std::size_t take, std::vector<std::vector<Item>>& out) {
  std::vector<Item> chosen;
  std::vector<bool> used(pool.size(), false);
  std::function<void(const std::vector<Item>&)> rec = [&](const std::vector<Item>& prefix) {
    if (chosen.size() == take) {
      auto full = prefix;
      full.insert(full.end(), chosen.begin(), chosen.end());
      out.push_back(std::move(full));
      return;
    }
    for (std::size_t n = 0; n < pool.size(); ++n) {
      if (used[n]) continue;
      used[n] = true;
      chosen.push_back(pool[n]);
      rec(prefix);
      chosen.pop_back();
      used[n] = false;
    }
  };
  for (const auto& prefix : prefixes) rec(prefix);
}

}  // namespace

std::vector<Recommendation> compatible_recommendations(const OrderedPartition& p,
                                                       std::size_t slots) {
  if (slots > p.num_items()) {
    throw std::invalid_argument("partition cannot fill " + std::to_string(slots) + " positions");
  }
  std::vector<std::vector<Item>> partial{{}};
  std::size_t filled = 0;
  for (const auto& subset : p.subsets()) {
    if (filled == slots) break;
    const std::size_t take = std::min(slots - filled, subset.size());
    std::vector<std::vector<Item>> next;
    extend_ordered(partial, subset, take, next);
    partial = std::move(next);
    filled += take;
  }
  std::vector<Recommendation> out;
  out.reserve(partial.size());
  for (auto& items : partial) out.emplace_back(std::move(items), p.num_items());
  return out;
}

std::vector<Recommendation> all_recommendations(std::size_t num_items, std::size_t slots) {
  std::vector<Item> everything(num_items);
  std::iota(everything.begin(), everything.end(), Item{0});
  return compatible_recommendations(OrderedPartition({everything}, num_items), slots);
}

// ---------------------------------------------------------------------------
// Enumeration

void enumerate_ordered_partitions(std::size_t num_items,
                                  const std::function<void(const OrderedPartition&)>& visit,
                                  std::size_t leader_shape_slots) {
  if (num_items == 0) throw std::invalid_argument("cannot enumerate partitions of zero items");
  if (num_items > kMaxEnumeratedItems) {
    throw std::invalid_argument("refusing to enumerate ordered partitions of " +
                                std::to_string(num_items) + " items (limit is " +
                                std::to_string(kMaxEnumeratedItems) + ")");
  }
  if (leader_shape_slots > num_items) {
    throw std::invalid_argument("leader shape requires K <= L");
  }

  // Restricted growth strings enumerate unordered set partitions; every
  // ordering of their blocks is then visited.
  std::vector<std::size_t> label(num_items, 0);
  std::function<void(std::size_t, std::size_t)> grow = [&](std::size_t n, std::size_t blocks) {
    if (n == num_items) {
      std::vector<OrderedPartition::Subset> parts(blocks);
      for (Item item = 0; item < num_items; ++item) parts[label[item]].push_back(item);
      std::vector<std::size_t> order(blocks);
      std::iota(order.begin(), order.end(), std::size_t{0});
      do {
        std::vector<OrderedPartition::Subset> ordered;
        ordered.reserve(blocks + 1);
        for (std::size_t b : order) ordered.push_back(parts[b]);
        if (leader_shape_slots == 0) {
          visit(OrderedPartition(ordered, num_items));
          continue;
        }
        OrderedPartition as_is(ordered, num_items);
        if (as_is.has_leader_shape(leader_shape_slots)) visit(as_is);
        ordered.emplace_back();
        OrderedPartition padded(std::move(ordered), num_items);
        if (padded.has_leader_shape(leader_shape_slots)) visit(padded);
      } while (std::next_permutation(order.begin(), order.end()));
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      label[n] = b;
      grow(n + 1, std::max(blocks, b + 1));
    }
  };
  grow(0, 0);
}

// ---------------------------------------------------------------------------
// Weak orders

WeakOrder::WeakOrder(const std::vector<std::vector<Item>>& classes, std::size_t num_items)
    : rank_(num_items, num_items) {
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (Item item : classes[c]) {
      if (item >= num_items) throw std::invalid_argument("weak order item out of range");
      if (rank_[item] != num_items) throw std::invalid_argument("weak order repeats an item");
      rank_[item] = c;
    }
  }
  for (std::size_t r : rank_) {
    if (r == num_items) throw std::invalid_argument("weak order does not rank every item");
  }
}

WeakOrder WeakOrder::from_scores(std::span<const double> scores) {
  std::vector<double> levels(scores.begin(), scores.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  WeakOrder order;
  order.rank_.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto it = std::find(levels.begin(), levels.end(), scores[i]);
    order.rank_[i] = static_cast<std::size_t>(it - levels.begin());
  }
  return order;
}

bool is_compatible(const Recommendation& rec, const WeakOrder& order) {
  const auto items = rec.items();
  if (items.empty()) return true;
  for (std::size_t k = 0; k + 1 < items.size(); ++k) {
    if (order.prefers(items[k + 1], items[k])) return false;
  }
  const Item last = items.back();
  for (Item j = 0; j < order.num_items(); ++j) {
    if (!rec.displays(j) && order.prefers(j, last)) return false;
  }
  return true;
}

}  // namespace unirank
