#include "unirank/baselines.hpp"

#include <numeric>
#include <stdexcept>

namespace unirank {

RandomPolicy::RandomPolicy(std::size_t num_items, std::size_t slots)
    : num_items_(num_items), slots_(slots), pool_(num_items) {
  if (slots_ == 0 || slots_ > num_items_) throw std::invalid_argument("random policy needs 1 <= K <= L");
  std::iota(pool_.begin(), pool_.end(), Item{0});
}

Recommendation RandomPolicy::do_step(Rng& rng) {
  for (std::size_t n = 0; n < slots_; ++n) {
    std::uniform_int_distribution<std::size_t> pick(n, num_items_ - 1);
    std::swap(pool_[n], pool_[pick(rng)]);
  }
  return Recommendation(std::vector<Item>(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(slots_)),
                        num_items_);
}

OraclePolicy::OraclePolicy(const ClickModel& model) : best_(optimal_reward(model).a_star) {}

}  // namespace unirank
