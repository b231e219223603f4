#pragma once

#include "pan/nn/mlp.hpp"
#include "pan/problems/control_problem.hpp"

namespace pan::train {

struct PenaltyWeights {
  double pde = 1.0;
  double boundary = 1.0;
  double initial = 1.0;
};

/// Components are unweighted means; total applies the weights.
struct LossBreakdown {
  double objective = 0.0;
  double pde = 0.0;
  double boundary = 0.0;
  double initial = 0.0;
  double adversarial = 0.0;
  double total = 0.0;
};

/// Extra solver term omega * (J - anchor)^2, anchor held constant.
struct AdversarialTerm {
  double omega = 0.0;
  double anchor_objective = 0.0;
  bool one_sided = false;  // square only the positive part of J - anchor
};

struct LossWithGradient {
  LossBreakdown breakdown;
  nn::ParamVector gradient;
};

/// Loss value and parameter gradient. `adversarial` may be null.
LossWithGradient evaluate_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                               const nn::ParamVector& params, const problems::SampleSet& samples,
                               const PenaltyWeights& weights, const AdversarialTerm* adversarial,
                               bool with_gradient = true);

/// Objective J only (value-only forward passes).
double objective_value(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                       const nn::ParamVector& params, const problems::SampleSet& samples);

LossBreakdown penalty_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                           const nn::ParamVector& params, const problems::SampleSet& samples,
                           const PenaltyWeights& weights);

LossBreakdown discriminator_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                                 const nn::ParamVector& params_d,
                                 const problems::SampleSet& samples,
                                 const PenaltyWeights& weights_d);

LossBreakdown solver_loss(const problems::ControlProblem& problem, const nn::MlpSpec& spec,
                          const nn::ParamVector& params_s, double discriminator_objective,
                          const problems::SampleSet& samples, const PenaltyWeights& weights_s,
                          double omega, bool one_sided = false);

/// Network spec matching a problem's input/output dimensions.
nn::MlpSpec network_spec(const problems::ControlProblem& problem, int depth, int width);

}  // namespace pan::train
