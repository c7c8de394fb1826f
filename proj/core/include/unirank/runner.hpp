#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unirank/click_model.hpp"
#include "unirank/experiment_config.hpp"
#include "unirank/policy.hpp"

namespace unirank {

struct RegretTrace {
  std::uint64_t run_seed = 0;
  std::vector<std::uint64_t> iterations;
  std::vector<double> cum_regret;
  /// Share of iterations in [T/2, T] whose leader was the optimal partition,
  /// for policies exposing a leader.
  std::optional<double> leader_accuracy;
  double ms_per_iteration = 0.0;
};

/// 1, T and `count` geometrically spaced iterations in between, sorted and
/// deduplicated.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon, std::size_t count = 100);

/// Plays `horizon` rounds of `policy` against `model` with a stream seeded by
/// `seed`, accumulating mu* - mu(a_t). `checkpoints` must be sorted and end
/// at `horizon`.
RegretTrace run_game(Policy& policy, const ClickModel& model, std::uint64_t horizon,
                     std::uint64_t seed, std::span<const std::uint64_t> checkpoints);

/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<Policy> make_policy(const std::string& name, const ClickModel& model,
                                    const UniRankConfig& config = {});

struct AggregatePoint {
  std::uint64_t iteration = 0;
  double mean = 0.0;
  /// Standard error of the mean; 0 for a single run.
  double std_error = 0.0;
  std::size_t runs = 0;
};

struct PolicyResult {
  std::string policy;
  std::vector<RegretTrace> runs;  // ordered by run index
  std::vector<AggregatePoint> aggregate;
};

/// Mean and standard error per checkpoint. All traces must share checkpoints.
std::vector<AggregatePoint> aggregate(std::span<const RegretTrace> runs);

/// R runs per policy; run r uses derive_seed(config.seed, r) whatever the
/// thread count, so the result does not depend on it.
std::vector<PolicyResult> run_experiment(const ExperimentConfig& config, const ClickModel& model);

/// Mean wall time of one round (step, click sampling, feedback) in ms.
double measure_timing(Policy& policy, const ClickModel& model, std::uint64_t warmup,
                      std::uint64_t iterations, std::uint64_t seed = 0);

/// policy,model,run_seed,iteration,cum_regret
void write_runs_csv(std::ostream& out, std::span<const PolicyResult> results,
                    const std::string& model_name);
/// policy,model,iteration,mean_regret,stderr,runs
void write_aggregate_csv(std::ostream& out, std::span<const PolicyResult> results,
                         const std::string& model_name);

}  // namespace unirank
