#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "pan/train/config.hpp"

namespace pan::train {

struct NetworkState {
  nn::ParamVector params;
  nn::ParamVector best_params;
  double best_value = std::numeric_limits<double>::infinity();
  int best_epoch = 0;  // 0: never recorded, best_params are the initial weights
  Optimizer optimizer;
  PlateauScheduler scheduler;
};

struct EpochRecord {
  int epoch = 0;
  LossBreakdown solver;
  LossBreakdown discriminator;  // zeros in penalty mode
  double lr_solver = 0.0;
  double lr_discriminator = 0.0;
};

struct TrainState {
  NetworkState solver;
  NetworkState discriminator;  // unused in penalty mode
  double discriminator_objective = 0.0;  // J^d at the current discriminator weights
  int epoch = 0;
  std::vector<EpochRecord> history;
};

/// Everything fixed for a run: problem, grids, network shapes.
struct TrainingSetup {
  const problems::ControlProblem* problem = nullptr;
  nn::MlpSpec solver_spec;
  nn::MlpSpec discriminator_spec;
  problems::SampleSet samples;
};

TrainingSetup make_setup(const TrainerConfig& config, const problems::ControlProblem& problem);

TrainState init_state(const TrainerConfig& config, const TrainingSetup& setup);

/// One pass of the two-step loop: discriminator first, then the solver against the
/// updated discriminator objective. On a non-finite loss the state is left untouched
/// and DivergenceError propagates.
void train_epoch(TrainState& state, const TrainerConfig& config, const TrainingSetup& setup);

using ProgressFn = std::function<void(const TrainState&)>;

/// Runs config.max_epochs epochs. `progress` (optional) fires every `progress_every` epochs.
void train(TrainState& state, const TrainerConfig& config, const TrainingSetup& setup,
           const ProgressFn& progress = {}, int progress_every = 1000);

struct NetworkMetrics {
  double objective = 0.0;            // J on the training grid
  double max_u_error = 0.0;          // dense grid
  double max_second_derivative_error = 0.0;  // |sum_j u_jj - analytic|, dense grid
  double max_control_error = std::numeric_limits<double>::quiet_NaN();  // distributed only
  double residual_mse = 0.0;         // mean squared PDE residual, training grid
  double residual_max = 0.0;         // max |residual|, dense grid
};

NetworkMetrics evaluate_network(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                                const nn::ParamVector& params,
                                const problems::SampleSet& samples);

/// First epoch (1-based) whose total loss is within `fraction` of the last epoch's.
int plateau_epoch(const std::vector<double>& losses, double fraction = 0.05);

}  // namespace pan::train
