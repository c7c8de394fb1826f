#include "unirank/kl_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace unirank {

double kl_bernoulli(double p, double q) noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double kl = 0.0;
  if (p > 0.0) {
    if (q <= 0.0) return inf;
    kl += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q >= 1.0) return inf;
    kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return std::max(0.0, kl);
}

double exploration_threshold(std::uint64_t t) noexcept {
  if (t <= 1) return 0.0;
  const double log_t = std::log(static_cast<double>(t));
  return log_t + 3.0 * std::log(std::max(1.0, log_t));
}

double kl_ucb_upper(double mu_hat, std::uint64_t n, std::uint64_t t, const KlIndexParams& params) {
  if (mu_hat == 1.0 || n == 0 || t == 0) return 0.0;
  if (!(params.tolerance > 0.0)) throw std::invalid_argument("KL index tolerance must be > 0");

  mu_hat = std::clamp(mu_hat, 0.0, 1.0);
  const double threshold = exploration_threshold(t);
  const double count = static_cast<double>(n);
  double lo = mu_hat;  // always admissible
  double hi = 1.0;     // never admissible: KL(mu_hat, 1) is infinite
  for (int it = 0; it < params.max_iterations && hi - lo > params.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count * kl_bernoulli(mu_hat, mid) <= threshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace unirank
