#include "unirank/experiment_config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace unirank {

namespace {

template <typename T>
T read_field(const nlohmann::json& doc, const char* field, T fallback) {
  if (!doc.contains(field)) return fallback;
  try {
    return doc.at(field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("field '") + field + "': " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names{"unirank", "random", "oracle"};
  return names;
}

void ExperimentConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("field 'horizon': must be >= 1");
  if (runs < 1) throw std::invalid_argument("field 'runs': must be >= 1");
  if (threads < 1) throw std::invalid_argument("field 'threads': must be >= 1");
  if (policies.empty()) throw std::invalid_argument("field 'policies': must not be empty");
  for (const auto& p : policies) {
    if (std::find(known_policies().begin(), known_policies().end(), p) == known_policies().end()) {
      throw std::invalid_argument("field 'policies': unknown policy '" + p + "'");
    }
  }
  if (!model && !model_path) throw std::invalid_argument("field 'model': missing");
  if (unirank.index.tolerance <= 0.0) throw std::invalid_argument("field 'kl_tolerance': must be > 0");
  if (unirank.index.max_iterations < 1) {
    throw std::invalid_argument("field 'kl_max_iterations': must be >= 1");
  }
}

ClickModel ExperimentConfig::load_model() const {
  if (model_path) return load_click_model(*model_path);
  if (!model) throw std::invalid_argument("field 'model': missing");
  return click_model_from_json(*model);
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  ExperimentConfig config;
  if (doc.contains("kind")) {
    config.model = doc;
    return config;
  }
  config.name = read_field<std::string>(doc, "name", config.name);
  if (!doc.contains("model")) throw std::invalid_argument("field 'model': missing");
  const auto& model = doc.at("model");
  if (model.is_string()) {
    std::filesystem::path path = model.get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    config.model_path = path.string();
  } else if (model.is_object()) {
    config.model = model;
  } else {
    throw std::invalid_argument("field 'model': expected an object or a path");
  }
  config.policies = read_field(doc, "policies", config.policies);
  config.horizon = read_field(doc, "horizon", config.horizon);
  config.runs = read_field(doc, "runs", config.runs);
  config.seed = read_field(doc, "seed", config.seed);
  config.checkpoint_count = read_field(doc, "checkpoints", config.checkpoint_count);
  config.threads = read_field(doc, "threads", config.threads);
  config.output_dir = read_field(doc, "output_dir", config.output_dir);
  if (doc.contains("unirank")) {
    const auto& u = doc.at("unirank");
    if (read_field(u, "optimistic_init", false)) config.unirank.unobserved = UnobservedIndex::kOptimistic;
    config.unirank.index.tolerance = read_field(u, "kl_tolerance", config.unirank.index.tolerance);
    config.unirank.index.max_iterations = read_field(u, "kl_max_iterations", config.unirank.index.max_iterations);
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  return experiment_config_from_json(doc, std::filesystem::path(path).parent_path().string());
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["name"] = config.name;
  if (config.model_path) {
    doc["model"] = *config.model_path;
  } else if (config.model) {
    doc["model"] = *config.model;
  }
  doc["policies"] = config.policies;
  doc["horizon"] = config.horizon;
  doc["runs"] = config.runs;
  doc["seed"] = config.seed;
  doc["checkpoints"] = config.checkpoint_count;
  doc["threads"] = config.threads;
  doc["output_dir"] = config.output_dir;
  doc["unirank"] = {{"optimistic_init", config.unirank.unobserved == UnobservedIndex::kOptimistic},
                    {"kl_tolerance", config.unirank.index.tolerance},
                    {"kl_max_iterations", config.unirank.index.max_iterations}};
  return doc;
}

}  // namespace unirank
