#pragma once

#include <iosfwd>
#include <string>

#include "pan/train/trainer.hpp"

namespace pan::train {

/// Every `config.history_every`-th epoch plus the last one.
void write_history_csv(std::ostream& out, const TrainState& state, const TrainerConfig& config);

/// Dense-grid table at the best weights of each network.
void write_solution_csv(std::ostream& out, const TrainState& state, const TrainerConfig& config,
                        const TrainingSetup& setup);

struct RunSummary {
  NetworkMetrics solver;
  NetworkMetrics discriminator;  // PAN mode only
  NetworkMetrics solver_final;   // last epoch's weights rather than the best ones
  double wall_seconds = 0.0;
};

RunSummary summarize(const TrainState& state, const TrainerConfig& config,
                     const TrainingSetup& setup);

/// metrics.json content (pretty-printed, key order fixed). wall time is the only
/// non-deterministic field.
std::string metrics_json(const RunSummary& summary, const TrainState& state,
                         const TrainerConfig& config);

}  // namespace pan::train
