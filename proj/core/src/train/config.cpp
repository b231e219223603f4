#include "pan/train/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pan/common/error.hpp"
#include "pan/problems/control_problem.hpp"

namespace pan::train {

std::string to_string(TrainMode mode) { return mode == TrainMode::pan ? "pan" : "penalty"; }

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line) {}

std::vector<std::string> TrainerConfig::validate() const {
  PAN_REQUIRE(schema_version == 1, "unsupported schema_version");
  PAN_REQUIRE(n >= 2, "grid n must be at least 2");
  PAN_REQUIRE(depth >= 1 && width >= 1, "network depth and width must be positive");
  PAN_REQUIRE(max_epochs >= 0, "epochs must be non-negative");
  PAN_REQUIRE(lr_solver >= 0.0 && lr_discriminator >= 0.0, "learning rates must be non-negative");
  PAN_REQUIRE(schedule.min_lr > 0.0, "min_lr must be positive");
  PAN_REQUIRE(schedule.patience >= 1, "patience must be at least 1");
  PAN_REQUIRE(omega >= 0.0, "omega must be non-negative");
  PAN_REQUIRE(history_every >= 1, "history_every must be at least 1");
  PAN_REQUIRE(max_epochs == 0 || effective_warmup() < max_epochs, "warmup must be below epochs");
  for (const auto* w : {&solver_weights, &discriminator_weights}) {
    PAN_REQUIRE(w->pde >= 0.0 && w->boundary >= 0.0 && w->initial >= 0.0,
                "penalty weights must be non-negative");
  }
  std::vector<std::string> warnings;
  if (lr_solver > 0.0 && lr_solver < schedule.min_lr) warnings.push_back("solver lr below min_lr");
  if (lr_discriminator > 0.0 && lr_discriminator < schedule.min_lr) {
    warnings.push_back("discriminator lr below min_lr");
  }
  if (mode == TrainMode::pan && (solver_weights.pde < discriminator_weights.pde ||
                                 solver_weights.boundary < discriminator_weights.boundary ||
                                 solver_weights.initial < discriminator_weights.initial)) {
    warnings.push_back("solver penalty weights are not all >= discriminator weights");
  }
  return warnings;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const int line = node.IsDefined() ? node.Mark().line + 1 : 0;
    throw ConfigError(source_, line, message);
  }

  void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                  const std::string& where) const {
    if (!map.IsMap()) fail(map, where + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
    }
  }

  template <class T>
  void get(const YAML::Node& map, const char* key, T& out) const {
    const YAML::Node node = map[key];
    if (!node.IsDefined() || node.IsNull()) return;
    try {
      out = node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, std::string("invalid value for '") + key + "'");
    }
  }

  void weights(const YAML::Node& map, PenaltyWeights& w, double& lr) const {
    check_keys(map, {"pde", "boundary", "initial", "lr"}, "network block");
    get(map, "pde", w.pde);
    get(map, "boundary", w.boundary);
    get(map, "initial", w.initial);
    get(map, "lr", lr);
  }

 private:
  std::string source_;
};

}  // namespace

TrainerConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.msg);
  }
  Reader r(source);
  if (!root.IsMap()) throw ConfigError(source, 0, "top level must be a mapping");
  r.check_keys(root,
               {"schema_version", "problem", "mode", "seed", "discriminator_seed_offset", "grid",
                "network", "solver", "discriminator", "omega", "one_sided", "optimizer", "epochs",
                "warmup", "schedule", "freeze_discriminator_after", "history_every"},
               "config");

  TrainerConfig c;
  if (!root["schema_version"].IsDefined()) {
    throw ConfigError(source, 0, "missing required key 'schema_version'");
  }
  r.get(root, "schema_version", c.schema_version);
  if (c.schema_version != 1) r.fail(root["schema_version"], "unsupported schema_version");

  r.get(root, "problem", c.problem);
  {
    const auto names = problems::problem_names();
    if (std::find(names.begin(), names.end(), c.problem) == names.end()) {
      r.fail(root["problem"], "unknown problem '" + c.problem + "'");
    }
  }
  std::string mode = to_string(c.mode);
  r.get(root, "mode", mode);
  if (mode == "pan") {
    c.mode = TrainMode::pan;
  } else if (mode == "penalty") {
    c.mode = TrainMode::penalty;
  } else {
    r.fail(root["mode"], "mode must be 'pan' or 'penalty'");
  }
  r.get(root, "seed", c.seed);
  r.get(root, "discriminator_seed_offset", c.discriminator_seed_offset);

  if (root["grid"].IsDefined()) {
    r.check_keys(root["grid"], {"n", "n_boundary"}, "grid");
    r.get(root["grid"], "n", c.n);
    r.get(root["grid"], "n_boundary", c.n_boundary);
  }
  if (root["network"].IsDefined()) {
    r.check_keys(root["network"], {"depth", "width"}, "network");
    r.get(root["network"], "depth", c.depth);
    r.get(root["network"], "width", c.width);
  }
  if (root["solver"].IsDefined()) r.weights(root["solver"], c.solver_weights, c.lr_solver);
  if (root["discriminator"].IsDefined()) {
    r.weights(root["discriminator"], c.discriminator_weights, c.lr_discriminator);
  }
  r.get(root, "omega", c.omega);
  r.get(root, "one_sided", c.one_sided);
  std::string opt = to_string(c.optimizer);
  r.get(root, "optimizer", opt);
  try {
    c.optimizer = optimizer_from_string(opt);
  } catch (const ContractViolation& e) {
    r.fail(root["optimizer"], e.what());
  }
  r.get(root, "epochs", c.max_epochs);
  r.get(root, "warmup", c.warmup);
  if (root["schedule"].IsDefined()) {
    r.check_keys(root["schedule"], {"min_lr", "patience", "start_epoch"}, "schedule");
    r.get(root["schedule"], "min_lr", c.schedule.min_lr);
    r.get(root["schedule"], "patience", c.schedule.patience);
    r.get(root["schedule"], "start_epoch", c.schedule.start_epoch);
  }
  r.get(root, "freeze_discriminator_after", c.freeze_discriminator_after);
  r.get(root, "history_every", c.history_every);

  try {
    c.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(source, 0, e.what());
  }
  return c;
}

TrainerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string dump_config(const TrainerConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "schema_version" << YAML::Value << c.schema_version;
  e << YAML::Key << "problem" << YAML::Value << c.problem;
  e << YAML::Key << "mode" << YAML::Value << to_string(c.mode);
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::Key << "discriminator_seed_offset" << YAML::Value << c.discriminator_seed_offset;
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap << YAML::Key << "n" << YAML::Value
    << c.n << YAML::Key << "n_boundary" << YAML::Value << c.n_boundary << YAML::EndMap;
  e << YAML::Key << "network" << YAML::Value << YAML::BeginMap << YAML::Key << "depth"
    << YAML::Value << c.depth << YAML::Key << "width" << YAML::Value << c.width << YAML::EndMap;
  auto block = [&](const char* name, const PenaltyWeights& w, double lr) {
    e << YAML::Key << name << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "pde" << YAML::Value << w.pde;
    e << YAML::Key << "boundary" << YAML::Value << w.boundary;
    e << YAML::Key << "initial" << YAML::Value << w.initial;
    e << YAML::Key << "lr" << YAML::Value << lr;
    e << YAML::EndMap;
  };
  block("solver", c.solver_weights, c.lr_solver);
  block("discriminator", c.discriminator_weights, c.lr_discriminator);
  e << YAML::Key << "omega" << YAML::Value << c.omega;
  e << YAML::Key << "one_sided" << YAML::Value << c.one_sided;
  e << YAML::Key << "optimizer" << YAML::Value << to_string(c.optimizer);
  e << YAML::Key << "epochs" << YAML::Value << c.max_epochs;
  e << YAML::Key << "warmup" << YAML::Value << c.warmup;
  e << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "min_lr" << YAML::Value << c.schedule.min_lr;
  e << YAML::Key << "patience" << YAML::Value << c.schedule.patience;
  e << YAML::Key << "start_epoch" << YAML::Value << c.schedule.start_epoch;
  e << YAML::EndMap;
  e << YAML::Key << "freeze_discriminator_after" << YAML::Value << c.freeze_discriminator_after;
  e << YAML::Key << "history_every" << YAML::Value << c.history_every;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace pan::train
