#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "pan/train/losses.hpp"
#include "pan/train/optim.hpp"

namespace pan::train {

enum class TrainMode { pan, penalty };

std::string to_string(TrainMode mode);

struct TrainerConfig {
  int schema_version = 1;
  std::string problem = "poisson1d-boundary";
  TrainMode mode = TrainMode::pan;
  std::uint64_t seed = 0;
  // discriminator initialised with seed + offset
  std::uint64_t discriminator_seed_offset = 1;

  int n = 32;
  int n_boundary = 0;
  int depth = 4;
  int width = 40;

  PenaltyWeights solver_weights{5000.0, 0.0, 0.0};
  PenaltyWeights discriminator_weights{1.0, 0.0, 0.0};
  double omega = 1.0;
  bool one_sided = false;

  OptimizerKind optimizer = OptimizerKind::adam;
  double lr_solver = 1e-3;
  double lr_discriminator = 1e-3;
  SchedulerConfig schedule{};

  int max_epochs = 200000;
  int warmup = -1;  // negative: 5% of max_epochs
  int freeze_discriminator_after = -1;  // negative: never
  int history_every = 100;  // history.csv row stride

  int effective_warmup() const { return warmup >= 0 ? warmup : max_epochs / 20; }

  /// Throws ContractViolation on violated invariants; returns warnings.
  std::vector<std::string> validate() const;
};

/// Parse failure with a source location.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

TrainerConfig parse_config(const std::string& text, const std::string& source = "<string>");
TrainerConfig load_config(const std::filesystem::path& path);
std::string dump_config(const TrainerConfig& config);

}  // namespace pan::train
