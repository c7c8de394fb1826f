#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unirank/click_model.hpp"
#include "unirank/unirank_policy.hpp"

namespace unirank {

/// One experiment: a model, the policies to play against it and the protocol.
///
/// JSON form:
///   {"name": "simul_pbm",
///    "model": {...} | "path/to/model.json",
///    "policies": ["unirank", "random"],
///    "horizon": 100000, "runs": 20, "seed": 42,
///    "checkpoints": 100, "threads": 1, "output_dir": "out",
///    "unirank": {"optimistic_init": false, "kl_tolerance": 1e-9,
///                "kl_max_iterations": 200}}
/// A document with a top-level "kind" is read as a bare model file.
struct ExperimentConfig {
  std::string name = "experiment";
  /// Inline model, used when model_path is unset.
  std::optional<nlohmann::json> model;
  std::optional<std::string> model_path;
  std::vector<std::string> policies{"unirank"};
  std::uint64_t horizon = 100000;
  std::uint64_t runs = 1;
  std::uint64_t seed = 0;
  /// Number of geometrically spaced checkpoints (t = 1 and t = T are added).
  std::size_t checkpoint_count = 100;
  std::size_t threads = 1;
  std::string output_dir = ".";
  UniRankConfig unirank;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  ClickModel load_model() const;
};

/// `base_dir` resolves a relative model path.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc,
                                             const std::string& base_dir = "");
ExperimentConfig load_experiment_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Policy names accepted in ExperimentConfig::policies.
const std::vector<std::string>& known_policies();

}  // namespace unirank
