// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "unirank/baselines.hpp"
#include "unirank/kl_index.hpp"
#include "unirank/runner.hpp"
#include "unirank/theory.hpp"
#include "unirank/unirank_policy.hpp"
#include "worked_iteration.hpp"

namespace fs = std::filesystem;
using namespace unirank;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

const std::vector<double> kSimulTheta{0.1, 0.08, 0.06, 0.04, 0.02, 1e-4, 1e-4, 1e-4, 1e-4, 1e-4};
const std::vector<double> kSimulKappa{1.0, 0.9, 0.83, 0.78, 0.75};
constexpr std::uint64_t kMasterSeed = 42;

Outcome pair_difference_oracles() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  int mismatched_support = 0;
  for (int n = 0; n < 1000; ++n) {
    const std::size_t items = 2 + rng() % 5;
    const std::size_t slots = 1 + rng() % items;
    const auto model = testing::random_model(rng, n % 2 == 0, items, slots);
    const auto all = all_recommendations(items, slots);
    const auto& rec = all[rng() % all.size()];
    const Item i = rng() % items;
    const Item j = (i + 1 + rng() % (items - 1)) % items;
    const auto a = pair_diff_analytic(model, rec, i, j);
    const auto e = pair_diff_enumerate(model, rec, i, j);
    worst = std::max(worst, std::abs(a.prob_difference - e.prob_difference));
    if (a.expected_difference.has_value() != e.expected_difference.has_value()) {
      ++mismatched_support;
    } else if (a.expected_difference) {
      worst = std::max(worst, std::abs(*a.expected_difference - *e.expected_difference));
    }
  }
  return {worst <= 1e-12 && mismatched_support == 0,
          fmt("1000 instances, max |analytic - enumerated| = %.2e", worst)};
}

Outcome identifiability_and_optimal_reward() {
  std::mt19937_64 rng(1002);
  std::size_t cases = 0;
  std::string failure;
  for (int n = 0; n < 50; ++n) {
    const std::size_t items = 2 + rng() % 5;
    const std::size_t slots = 1 + rng() % std::min<std::size_t>(items, 4);
    const auto model = testing::random_model(rng, n % 2 == 0, items, slots);
    for (const auto& report : {check_identifiability(model, 6, 4), check_optimal_reward(model, 6, 4)}) {
      cases += report.cases;
      if ((!report.applicable || !report.passed) && failure.empty()) {
        failure = report.name + ": " + report.counterexample.value_or("not applicable");
      }
    }
  }
  return {failure.empty(), failure.empty() ? "50 models, " + std::to_string(cases) + " cases" : failure};
}

Outcome pseudo_unimodality() {
  std::mt19937_64 rng(1003);
  std::size_t cases = 0;
  std::string failure;
  for (std::size_t items : {3u, 4u, 5u}) {
    for (int n = 0; n < 20; ++n) {
      const std::size_t slots = 1 + rng() % items;
      const auto model = testing::random_model(rng, n % 2 == 0, items, slots);
      const auto report = check_pseudo_unimodality(model, 5);
      cases += report.cases;
      if ((!report.applicable || !report.passed) && failure.empty()) {
        failure = "L=" + std::to_string(items) + ": " + report.counterexample.value_or("not applicable");
      }
    }
  }
  return {failure.empty(), failure.empty() ? "60 models (20 per L), " + std::to_string(cases) + " partitions" : failure};
}

Outcome worked_iteration() {
  const auto stats = testing::worked_iteration_stats();
  const auto leader = elect_leader(stats, testing::kWorkedSlots);
  const auto choice = select_partition(leader, stats, testing::kWorkedLeaderCount);
  const bool pass = leader.to_string() == "({1,2}|{3}|{4,5}|{6,7})" &&
                    choice.chosen.to_string() == "({1,2}|{3,4,5}|{6,7})" && choice.chosen_rank == 2;
  return {pass, "leader " + leader.to_string() + ", played " + choice.chosen.to_string() + " (neighbor " +
                    std::to_string(choice.chosen_rank) + ")"};
}

Outcome gap_formulas() {
  std::mt19937_64 rng(1004);
  std::vector<ClickModel> models{ClickModel::pbm(kSimulTheta, kSimulKappa).truncated(6, 3),
                                 ClickModel::cm(kSimulTheta, 5).truncated(6, 4)};
  for (std::size_t items = 2; items <= 6; ++items) {
    for (std::size_t slots = 1; slots <= items; ++slots) {
      for (bool pbm : {true, false}) models.push_back(testing::random_model(rng, pbm, items, slots, true));
    }
  }
  double worst = 0.0;
  bool bound_ok = true;
  for (const auto& model : models) {
    const auto closed = gaps_closed_form(model);
    const auto enumerated = gaps_enumerated(model);
    for (std::size_t n = 0; n < closed.items.size(); ++n) {
      const auto& a = closed.items[n];
      const auto& b = enumerated.items[n];
      worst = std::max({worst, std::abs(a.prob_difference - b.prob_difference), std::abs(a.reward_gap - b.reward_gap)});
      if (model.num_items() > model.num_slots()) {
        worst = std::max(worst, std::abs(a.click_difference - b.click_difference));
      } else if (a.click_difference > b.click_difference + 1e-12) {
        bound_ok = false;
      }
    }
  }
  return {worst <= 1e-12 && bound_ok,
          std::to_string(models.size()) + " models with L<=6" + fmt(", max deviation %.2e", worst)};
}

struct SimulSummary {
  double unirank_final = 0.0;
  double random_final = 0.0;
  double early_increment = 0.0;  // [1e3, 1e4]
  double late_increment = 0.0;   // [1e4, 1e5]
  double leader_accuracy = 0.0;
  double worst_run_accuracy = 1.0;
};

SimulSummary simul_experiment(const ClickModel& model) {
  constexpr std::uint64_t horizon = 100000;
  constexpr std::uint64_t runs = 20;
  const std::vector<std::uint64_t> grid{1000, 10000, horizon};
  SimulSummary s;
  std::vector<double> at(3, 0.0);
  for (std::uint64_t r = 0; r < runs; ++r) {
    UniRankPolicy unirank(model.num_items(), model.num_slots());
    const auto trace = run_game(unirank, model, horizon, derive_seed(kMasterSeed, r), grid);
    for (std::size_t c = 0; c < 3; ++c) at[c] += trace.cum_regret[c] / runs;
    s.leader_accuracy += *trace.leader_accuracy / runs;
    s.worst_run_accuracy = std::min(s.worst_run_accuracy, *trace.leader_accuracy);

    RandomPolicy random(model.num_items(), model.num_slots());
    s.random_final += run_game(random, model, horizon, derive_seed(kMasterSeed, r), grid).cum_regret.back() / runs;
  }
  s.unirank_final = at[2];
  s.early_increment = at[1] - at[0];
  s.late_increment = at[2] - at[1];
  return s;
}

Outcome judge_simul(const SimulSummary& s, std::string& detail) {
  const bool a = s.unirank_final * 20.0 <= s.random_final;
  const bool b = s.late_increment <= 1.5 * s.early_increment;
  const bool c = s.leader_accuracy >= 0.95;
  detail = fmt("(a) regret %.1f vs random %.1f (x%.1f)", s.unirank_final, s.random_final,
               s.random_final / s.unirank_final) +
           fmt("; (b) increments %.1f over [1e3,1e4], %.1f over [1e4,1e5]", s.early_increment, s.late_increment) +
           fmt("; (c) leader optimal %.4f (worst run %.4f)", s.leader_accuracy, s.worst_run_accuracy);
  return {a && b && c, detail};
}

Outcome simul_pbm() {
  std::string detail;
  return judge_simul(simul_experiment(ClickModel::pbm(kSimulTheta, kSimulKappa)), detail);
}

Outcome simul_cm() {
  const auto model = ClickModel::cm(kSimulTheta, 5);
  const auto s = simul_experiment(model);
  std::string detail;
  auto outcome = judge_simul(s, detail);
  const double bound = regret_upper_bound(gaps_cm(kSimulTheta, 5), 100000);
  const bool d = std::isfinite(s.unirank_final) && s.unirank_final < 3.0 * bound;
  outcome.pass = outcome.pass && d;
  outcome.detail += fmt("; (d) regret %.1f < 3 x bound %.1f", s.unirank_final, bound);
  return outcome;
}

Outcome timing() {
  const auto model = ClickModel::pbm(kSimulTheta, kSimulKappa);
  UniRankPolicy policy(10, 5);
  const double ms = measure_timing(policy, model, 10000, 100000, kMasterSeed);
  return {ms <= 1.0, fmt("%.4f ms per recommendation over 1e5 iterations (L=10, K=5)", ms)};
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "unirank_acceptance_determinism";
  fs::remove_all(root);
  const std::string base = std::string(UNIRANK_CLI) + " run --config " + UNIRANK_CONFIG_DIR +
                           "/simul_pbm.json --horizon 20000 --runs 4 --seed 42 --output ";
  const int first = shell(base + (root / "a").string() + " > /dev/null");
  const int second = shell(base + (root / "b").string() + " > /dev/null");
  if (first != 0 || second != 0) return {false, "run exited with " + std::to_string(first) + "/" + std::to_string(second)};
  bool same = true;
  std::size_t bytes = 0;
  for (const char* file : {"runs.csv", "aggregate.csv"}) {
    const auto a = slurp(root / "a" / file);
    const auto b = slurp(root / "b" / file);
    same = same && !a.empty() && a == b;
    bytes += a.size();
  }
  fs::remove_all(root);
  return {same, std::string(same ? "identical" : "different") + " runs.csv and aggregate.csv (" +
                    std::to_string(bytes) + " bytes)"};
}

Outcome kl_index() {
  const std::vector<double> mus{0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.99};
  const std::vector<std::uint64_t> counts{1, 2, 3, 5, 10, 20, 50, 100, 1000, 10000};
  const std::vector<std::uint64_t> times{2, 3, 5, 10, 30, 100, 1000, 10000, 100000, 1000000};
  double worst = 0.0;
  std::size_t violations = 0;
  std::vector<double> value(1000);
  auto at = [&](std::size_t m, std::size_t n, std::size_t t) -> double& { return value[(m * 10 + n) * 10 + t]; };
  for (std::size_t m = 0; m < 10; ++m) {
    for (std::size_t n = 0; n < 10; ++n) {
      for (std::size_t t = 0; t < 10; ++t) {
        at(m, n, t) = kl_ucb_upper(mus[m], counts[n], times[t]);
        worst = std::max(worst, std::abs(at(m, n, t) - testing::kl_upper_grid(mus[m], counts[n], times[t])));
      }
    }
  }
  constexpr double slack = 1e-9;
  for (std::size_t m = 0; m < 10; ++m) {
    for (std::size_t n = 0; n < 10; ++n) {
      for (std::size_t t = 0; t < 10; ++t) {
        if (at(m, n, t) < mus[m]) ++violations;
        if (m + 1 < 10 && at(m + 1, n, t) < at(m, n, t) - slack) ++violations;
        if (n + 1 < 10 && at(m, n + 1, t) > at(m, n, t) + slack) ++violations;
        if (t + 1 < 10 && at(m, n, t + 1) < at(m, n, t) - slack) ++violations;
      }
    }
  }
  return {worst <= 1e-5 && violations == 0,
          fmt("1000 grid points, max |bisection - grid| = %.2e, ", worst) + std::to_string(violations) +
              " monotonicity violations"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0 when no runtime target applies
  };
  const std::vector<Criterion> criteria{
      {"pair difference oracles agree (analytic vs enumeration)", pair_difference_oracles, 10.0},
      {"identifiability and optimal reward by enumeration", identifiability_and_optimal_reward, 60.0},
      {"pseudo-unimodality over all ordered partitions", pseudo_unimodality, 60.0},
      {"worked iteration: leader and optimistic partition", worked_iteration, 0.0},
      {"gap closed forms match enumeration", gap_formulas, 0.0},
      {"Simul-PBM scaled experiment", simul_pbm, 300.0},
      {"Simul-CM scaled experiment", simul_cm, 300.0},
      {"UniRank time per recommendation <= 1 ms", timing, 0.0},
      {"run is byte-for-byte deterministic", determinism, 0.0},
      {"KL-UCB index vs grid search", kl_index, 0.0},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && seconds > c.budget_s) {
      outcome.pass = false;
      outcome.detail += fmt("; over the %.0f s runtime budget", c.budget_s);
    }
    if (!outcome.pass) ++failed;
    std::printf("%s  %s: %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", c.name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
