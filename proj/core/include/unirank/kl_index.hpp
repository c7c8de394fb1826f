#pragma once

#include <cstdint>

namespace unirank {

struct KlIndexParams {
  /// Bisection stops once the bracket is narrower than this.
  double tolerance = 1e-9;
  int max_iterations = 200;
};

/// KL divergence from Bernoulli(p) to Bernoulli(q), with 0 log 0 = 0.
/// Returns +inf when q is 0 or 1 and p differs from q.
double kl_bernoulli(double p, double q) noexcept;

/// log(t) + 3 log(max(1, log t)); 0 for t <= 1.
double exploration_threshold(std::uint64_t t) noexcept;

/// KL-UCB upper confidence bound
///   sup { mu in [mu_hat, 1] : n * KL(mu_hat, mu) <= exploration_threshold(t) },
/// found by bisection. Returns 0 when mu_hat == 1, n == 0 or t == 0.
double kl_ucb_upper(double mu_hat, std::uint64_t n, std::uint64_t t,
                    const KlIndexParams& params = {});

}  // namespace unirank
