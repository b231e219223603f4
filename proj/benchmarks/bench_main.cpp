#include <benchmark/benchmark.h>

#include "pan/linear/search.hpp"
#include "pan/nn/batch.hpp"
#include "pan/train/trainer.hpp"

namespace {

using namespace pan;

void BM_ForwardBackward(benchmark::State& st) {
  const nn::MlpSpec spec{static_cast<int>(st.range(0)), 1, 4, static_cast<int>(st.range(1))};
  const auto params = nn::init_params(spec, 1);
  const Eigen::MatrixXd X = Eigen::MatrixXd::Random(spec.input_dim, st.range(2));
  nn::ParamVector grad = nn::ParamVector::Zero(params.size());
  for (auto _ : st) {
    const auto tape = nn::forward_batch(spec, params, X, 2);
    const auto adj = tape.output;
    nn::backward_batch(spec, params, tape, adj, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_ForwardBackward)->Args({1, 40, 32})->Args({2, 60, 256})->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& st, const char* name, int width, int n, int nb) {
  train::TrainerConfig cfg;
  cfg.problem = name;
  cfg.width = width;
  cfg.n = n;
  cfg.n_boundary = nb;
  const auto problem = problems::make_problem(name);
  const auto setup = train::make_setup(cfg, *problem);
  auto state = train::init_state(cfg, setup);
  for (auto _ : st) train::train_epoch(state, cfg, setup);
}
BENCHMARK_CAPTURE(BM_TrainEpoch, ex1_pan, "poisson1d-boundary", 40, 32, 0)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_TrainEpoch, ex2_pan, "poisson2d-distributed", 60, 16, 32)
    ->Unit(benchmark::kMicrosecond);

void BM_MinimizePap(benchmark::State& st) {
  const auto problem = linear::LinearControlProblem::toy();
  const linear::PapConfig cfg{5.0, 0.5, 1.0, 2};
  const double anchor =
      linear::evaluate_objective(problem, linear::penalty_solution(problem, 0.5));
  for (auto _ : st) {
    auto r = linear::minimize_pap(problem, cfg, anchor, linear::PapPoint(0.0, 0.0));
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_MinimizePap)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
