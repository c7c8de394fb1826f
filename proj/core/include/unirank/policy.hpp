#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "unirank/click_model.hpp"
#include "unirank/partition.hpp"
#include "unirank/random.hpp"

namespace unirank {

/// Raised when step() and feedback() do not alternate.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A ranking policy: one step() per round, followed by exactly one feedback().
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  Recommendation step(Rng& rng);
  void feedback(const ClickVector& clicks);

  /// Leader partition of the current round, for policies that have one.
  virtual std::optional<OrderedPartition> current_leader() const { return std::nullopt; }

 protected:
  virtual Recommendation do_step(Rng& rng) = 0;
  virtual void do_feedback(const ClickVector& clicks) = 0;

 private:
  bool awaiting_feedback_ = false;
};

}  // namespace unirank
