#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "unirank/experiment_config.hpp"
#include "unirank/runner.hpp"
#include "unirank/theory.hpp"
#include "unirank/unirank_policy.hpp"

namespace fs = std::filesystem;
using namespace unirank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitVerifyFailed = 3;

struct ModelArgs {
  std::string config;
  std::size_t items = 0;
  std::size_t slots = 0;
};

void add_model_options(CLI::App& cmd, ModelArgs& args) {
  cmd.add_option("--config,--model", args.config, "Experiment config or bare model JSON")->required();
  cmd.add_option("--items", args.items, "Keep only the first L items");
  cmd.add_option("--slots", args.slots, "Keep only the first K positions");
}

ClickModel resolve_model(const ModelArgs& args) {
  ClickModel model = load_experiment_config(args.config).load_model();
  if (args.items != 0 || args.slots != 0) {
    const std::size_t items = args.items != 0 ? args.items : model.num_items();
    const std::size_t slots = args.slots != 0 ? args.slots : std::min(model.num_slots(), items);
    model = model.truncated(items, slots);
  }
  return model;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// --- run ---------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> policies;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> checkpoints;
  std::optional<std::string> trace;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig config = load_experiment_config(args.config);
  if (args.horizon) config.horizon = *args.horizon;
  if (args.runs) config.runs = *args.runs;
  if (args.seed) config.seed = *args.seed;
  if (args.output) config.output_dir = *args.output;
  if (args.policies) config.policies = split_list(*args.policies);
  if (args.threads) config.threads = *args.threads;
  if (args.checkpoints) config.checkpoint_count = *args.checkpoints;
  config.validate();
  const ClickModel model = config.load_model();
  for (const auto& w : model.warnings()) std::cerr << "warning: " << w << '\n';

  const auto results = run_experiment(config, model);

  fs::create_directories(config.output_dir);
  const fs::path out_dir(config.output_dir);
  {
    std::ofstream out(out_dir / "runs.csv");
    write_runs_csv(out, results, config.name);
  }
  {
    std::ofstream out(out_dir / "aggregate.csv");
    write_aggregate_csv(out, results, config.name);
  }
  {
    // The sidecar carries the model inline so the run can be replayed from it alone.
    ExperimentConfig sidecar = config;
    sidecar.model = to_json(model);
    sidecar.model_path.reset();
    std::ofstream out(out_dir / "config.json");
    out << to_json(sidecar).dump(2) << '\n';
  }

  if (args.trace) {
    UniRankPolicy policy(model.num_items(), model.num_slots(), config.unirank);
    std::ofstream sink(*args.trace);
    policy.set_trace(&sink);
    const auto grid = default_checkpoints(config.horizon, config.checkpoint_count);
    run_game(policy, model, config.horizon, derive_seed(config.seed, 0), grid);
  }

  std::cout << "policy      final_regret   stderr      leader_acc  ms/iter\n";
  for (const auto& r : results) {
    const auto& last = r.aggregate.back();
    double accuracy = 0.0;
    double ms = 0.0;
    bool has_accuracy = false;
    for (const auto& run : r.runs) {
      ms += run.ms_per_iteration;
      if (run.leader_accuracy) {
        accuracy += *run.leader_accuracy;
        has_accuracy = true;
      }
    }
    const double n = static_cast<double>(r.runs.size());
    char line[160];
    std::snprintf(line, sizeof line, "%-10s  %-13s  %-10s  %-10s  %s", r.policy.c_str(),
                  fixed(last.mean, 2).c_str(), fixed(last.std_error, 2).c_str(),
                  has_accuracy ? fixed(accuracy / n, 4).c_str() : "-", fixed(ms / n, 4).c_str());
    std::cout << line << '\n';
  }
  std::cout << "wrote " << (out_dir / "aggregate.csv").string() << ", " << (out_dir / "runs.csv").string()
            << ", " << (out_dir / "config.json").string() << '\n';
  return kExitOk;
}

// --- verify ------------------------------------------------------------------

int cmd_verify(const ModelArgs& model_args, std::size_t max_items, std::size_t max_slots) {
  const ClickModel model = resolve_model(model_args);
  std::vector<CheckReport> checks;
  checks.push_back(check_strict_top_k(model));
  checks.push_back(check_identifiability(model, max_items, max_slots));
  checks.push_back(check_optimal_reward(model, max_items, max_slots));
  checks.push_back(check_pseudo_unimodality(model, max_items));

  CheckReport gaps;
  gaps.name = "gap_closed_forms";
  if (!checks.front().passed) {
    gaps.applicable = false;
    gaps.notes.push_back("needs a strict order on the top-K items");
  } else if (model.num_items() > max_items || model.num_slots() > max_slots) {
    gaps.applicable = false;
    gaps.notes.push_back("needs L <= " + std::to_string(max_items) + " and K <= " + std::to_string(max_slots));
  } else {
    const auto closed = gaps_closed_form(model);
    const auto enumerated = gaps_enumerated(model);
    for (std::size_t n = 0; n < closed.items.size(); ++n) {
      const auto& a = closed.items[n];
      const auto& b = enumerated.items[n];
      ++gaps.cases;
      const bool ok = std::abs(a.prob_difference - b.prob_difference) <= 1e-12 &&
                      std::abs(a.reward_gap - b.reward_gap) <= 1e-12 &&
                      a.click_difference <= b.click_difference + 1e-12;
      if (!ok && gaps.passed) {
        gaps.passed = false;
        gaps.counterexample = "closed form disagrees with enumeration at k=" + std::to_string(a.rank);
      }
    }
  }
  checks.push_back(gaps);

  bool passed = true;
  nlohmann::json report;
  report["model"] = to_json(model);
  report["warnings"] = model.warnings();
  report["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    report["checks"].push_back(to_json(c));
    if (c.applicable && !c.passed) passed = false;
  }
  report["passed"] = passed;
  std::cout << report.dump(2) << '\n';
  return passed ? kExitOk : kExitVerifyFailed;
}

// --- gaps --------------------------------------------------------------------

int cmd_gaps(const ModelArgs& model_args, std::uint64_t horizon) {
  const ClickModel model = resolve_model(model_args);
  const GapReport report = gaps_closed_form(model);
  nlohmann::json doc = to_json(report);
  doc["horizon"] = horizon;
  doc["regret_bound_leading_term"] = regret_upper_bound(report, horizon);
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  ModelArgs model;
  std::string policies = "unirank,random";
  std::uint64_t warmup = 1000;
  std::uint64_t iterations = 10000;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_bench(const BenchArgs& args) {
  const ClickModel model = resolve_model(args.model);
  const std::string model_name = fs::path(args.model.config).stem().string();
  if (args.repeats < 1 || args.iterations < 1) throw std::invalid_argument("field 'repeats'/'iterations': must be >= 1");

  std::ostringstream csv;
  csv << "policy,model,repeat,ms_per_iteration\n";
  std::cout << "policy      mean_ms    std_ms\n";
  for (const auto& name : split_list(args.policies)) {
    std::vector<double> samples;
    for (std::size_t r = 0; r < args.repeats; ++r) {
      auto policy = make_policy(name, model);
      const double ms = measure_timing(*policy, model, args.warmup, args.iterations, derive_seed(args.seed, r));
      samples.push_back(ms);
      char value[32];
      std::snprintf(value, sizeof value, "%.6g", ms);
      csv << name << ',' << model_name << ',' << r << ',' << value << '\n';
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    const double sd = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;
    char line[128];
    std::snprintf(line, sizeof line, "%-10s  %-9s  %s", name.c_str(), fixed(mean, 4).c_str(), fixed(sd, 4).c_str());
    std::cout << line << '\n';
  }
  if (!args.output.empty()) {
    std::ofstream out(args.output);
    out << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UniRank online learning to rank simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Play policies against a click model and write regret CSVs");
  run->add_option("--config", run_args.config, "Experiment config JSON")->required();
  run->add_option("--horizon", run_args.horizon, "Iterations per run (T)");
  run->add_option("--runs", run_args.runs, "Independent runs per policy (R)");
  run->add_option("--seed", run_args.seed, "Master seed");
  run->add_option("--output", run_args.output, "Output directory");
  run->add_option("--policies", run_args.policies, "Comma separated: unirank,random,oracle");
  run->add_option("--threads", run_args.threads, "Worker threads");
  run->add_option("--checkpoints", run_args.checkpoints, "Geometric checkpoints between 1 and T");
  run->add_option("--trace", run_args.trace, "JSON-lines trace of UniRank run 0");

  ModelArgs verify_model;
  std::size_t verify_max_items = 6;
  std::size_t verify_max_slots = 4;
  auto* verify = app.add_subcommand("verify", "Check the modelling assumptions by enumeration");
  add_model_options(*verify, verify_model);
  verify->add_option("--max-items", verify_max_items, "Skip enumerations above this L")->capture_default_str();
  verify->add_option("--max-slots", verify_max_slots, "Skip enumerations above this K")->capture_default_str();

  ModelArgs gaps_model;
  std::uint64_t gaps_horizon = 100000;
  auto* gaps = app.add_subcommand("gaps", "Gap constants and the leading regret term");
  add_model_options(*gaps, gaps_model);
  gaps->add_option("--horizon", gaps_horizon, "T for the log T term")->capture_default_str();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Mean time per recommendation");
  add_model_options(*bench, bench_args.model);
  bench->add_option("--policies", bench_args.policies)->capture_default_str();
  bench->add_option("--warmup", bench_args.warmup)->capture_default_str();
  bench->add_option("--iterations", bench_args.iterations)->capture_default_str();
  bench->add_option("--repeats", bench_args.repeats)->capture_default_str();
  bench->add_option("--seed", bench_args.seed)->capture_default_str();
  bench->add_option("--output", bench_args.output, "Write policy,model,repeat,ms_per_iteration CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*verify) return cmd_verify(verify_model, verify_max_items, verify_max_slots);
    if (*gaps) return cmd_gaps(gaps_model, gaps_horizon);
    if (*bench) return cmd_bench(bench_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
