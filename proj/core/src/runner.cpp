#include "unirank/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "unirank/baselines.hpp"
#include "unirank/theory.hpp"
#include "unirank/unirank_policy.hpp"

namespace unirank {

namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon, std::size_t count) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::vector<std::uint64_t> points{1};
  const double top = std::log(static_cast<double>(horizon));
  for (std::size_t n = 1; n <= count; ++n) {
    const double t = std::exp(top * static_cast<double>(n) / static_cast<double>(count + 1));
    points.push_back(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::llround(t)), 1, horizon));
  }
  points.push_back(horizon);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

RegretTrace run_game(Policy& policy, const ClickModel& model, std::uint64_t horizon,
                     std::uint64_t seed, std::span<const std::uint64_t> checkpoints) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (checkpoints.empty() || checkpoints.back() != horizon ||
      !std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("checkpoints must be sorted and end at the horizon");
  }
  const double mu_star = optimal_reward(model).mu_star;
  const OrderedPartition star = optimal_partition(model);
  const std::uint64_t half = horizon / 2 == 0 ? 1 : horizon / 2;

  RegretTrace trace;
  trace.run_seed = seed;
  Rng rng(seed);
  double regret = 0.0;
  std::uint64_t leader_hits = 0;
  bool has_leader = false;
  auto next = checkpoints.begin();

  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const Recommendation rec = policy.step(rng);
    if (t >= half) {
      const auto leader = policy.current_leader();
      if (leader) {
        has_leader = true;
        if (*leader == star) ++leader_hits;
      }
    }
    policy.feedback(sample_clicks(model, rec, rng));
    regret += std::max(0.0, mu_star - expected_reward(model, rec));
    while (next != checkpoints.end() && *next == t) {
      trace.iterations.push_back(t);
      trace.cum_regret.push_back(regret);
      ++next;
    }
  }
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  trace.ms_per_iteration = elapsed.count() / static_cast<double>(horizon);
  if (has_leader) {
    trace.leader_accuracy = static_cast<double>(leader_hits) / static_cast<double>(horizon - half + 1);
  }
  return trace;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const ClickModel& model,
                                    const UniRankConfig& config) {
  if (name == "unirank") return std::make_unique<UniRankPolicy>(model.num_items(), model.num_slots(), config);
  if (name == "random") return std::make_unique<RandomPolicy>(model.num_items(), model.num_slots());
  if (name == "oracle") return std::make_unique<OraclePolicy>(model);
  throw std::invalid_argument("unknown policy '" + name + "'");
}

std::vector<AggregatePoint> aggregate(std::span<const RegretTrace> runs) {
  std::vector<AggregatePoint> points;
  if (runs.empty()) return points;
  const auto& grid = runs.front().iterations;
  for (const auto& run : runs) {
    if (run.iterations != grid) throw std::invalid_argument("traces do not share checkpoints");
  }
  const double n = static_cast<double>(runs.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double sum = 0.0;
    for (const auto& run : runs) sum += run.cum_regret[c];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& run : runs) sq += (run.cum_regret[c] - mean) * (run.cum_regret[c] - mean);
    const double se = runs.size() > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
    points.push_back({grid[c], mean, se, runs.size()});
  }
  return points;
}

std::vector<PolicyResult> run_experiment(const ExperimentConfig& config, const ClickModel& model) {
  config.validate();
  const auto checkpoints = default_checkpoints(config.horizon, config.checkpoint_count);
  std::vector<PolicyResult> results;
  for (const auto& name : config.policies) {
    PolicyResult result;
    result.policy = name;
    result.runs.resize(config.runs);

    std::atomic<std::uint64_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::uint64_t r = cursor++; r < config.runs; r = cursor++) {
        try {
          auto policy = make_policy(name, model, config.unirank);
          result.runs[r] = run_game(*policy, model, config.horizon, derive_seed(config.seed, r), checkpoints);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const std::size_t workers = std::min<std::uint64_t>(config.threads, config.runs);
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    result.aggregate = aggregate(result.runs);
    results.push_back(std::move(result));
  }
  return results;
}

double measure_timing(Policy& policy, const ClickModel& model, std::uint64_t warmup,
                      std::uint64_t iterations, std::uint64_t seed) {
  if (iterations < 1) throw std::invalid_argument("timing needs at least one iteration");
  Rng rng(seed);
  for (std::uint64_t t = 0; t < warmup; ++t) {
    const Recommendation rec = policy.step(rng);
    policy.feedback(sample_clicks(model, rec, rng));
  }
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t t = 0; t < iterations; ++t) {
    const Recommendation rec = policy.step(rng);
    policy.feedback(sample_clicks(model, rec, rng));
  }
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  return elapsed.count() / static_cast<double>(iterations);
}

void write_runs_csv(std::ostream& out, std::span<const PolicyResult> results,
                    const std::string& model_name) {
  out << "policy,model,run_seed,iteration,cum_regret\n";
  for (const auto& result : results) {
    for (const auto& run : result.runs) {
      for (std::size_t c = 0; c < run.iterations.size(); ++c) {
        out << result.policy << ',' << model_name << ',' << run.run_seed << ',' << run.iterations[c] << ','
            << format_real(run.cum_regret[c]) << '\n';
      }
    }
  }
}

void write_aggregate_csv(std::ostream& out, std::span<const PolicyResult> results,
                         const std::string& model_name) {
  out << "policy,model,iteration,mean_regret,stderr,runs\n";
  for (const auto& result : results) {
    for (const auto& point : result.aggregate) {
      out << result.policy << ',' << model_name << ',' << point.iteration << ',' << format_real(point.mean)
          << ',' << format_real(point.std_error) << ',' << point.runs << '\n';
    }
  }
}

}  // namespace unirank
