#pragma once

#include <cstddef>
#include <string>

#include "unirank/click_model.hpp"
#include "unirank/policy.hpp"

namespace unirank {

/// Uniform over all ordered K-subsets of the L items; ignores feedback.
class RandomPolicy final : public Policy {
 public:
  RandomPolicy(std::size_t num_items, std::size_t slots);
  std::string name() const override { return "random"; }

 protected:
  Recommendation do_step(Rng& rng) override;
  void do_feedback(const ClickVector&) override {}

 private:
  std::size_t num_items_;
  std::size_t slots_;
  std::vector<Item> pool_;
};

/// Clairvoyant policy replaying the optimal recommendation of a known model.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const ClickModel& model);
  std::string name() const override { return "oracle"; }

 protected:
  Recommendation do_step(Rng&) override { return best_; }
  void do_feedback(const ClickVector&) override {}

 private:
  Recommendation best_;
};

}  // namespace unirank
