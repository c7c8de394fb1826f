#include "unirank/policy.hpp"

namespace unirank {

Recommendation Policy::step(Rng& rng) {
  if (awaiting_feedback_) {
    throw ProtocolError(name() + ": step() called again before feedback()");
  }
  Recommendation rec = do_step(rng);
  awaiting_feedback_ = true;
  return rec;
}

void Policy::feedback(const ClickVector& clicks) {
  if (!awaiting_feedback_) {
    throw ProtocolError(name() + ": feedback() without a preceding step()");
  }
  do_feedback(clicks);
  awaiting_feedback_ = false;
}

}  // namespace unirank
