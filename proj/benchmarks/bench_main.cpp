#include <benchmark/benchmark.h>

#include "admmlab/admm.hpp"
#include "admmlab/prediction.hpp"

using namespace admmlab;

namespace {

ProblemInstance sparse_instance(int n, double delta) {
  RngStream rng(7);
  return generate_instance(SignalPrior::bernoulli_gaussian(0.8), MatrixEnsemble::GaussianIID, n,
                           delta, 0.001, rng);
}

void BM_Prepare(benchmark::State& state) {
  const auto inst = sparse_instance(static_cast<int>(state.range(0)), 0.9);
  const auto path = state.range(1) ? CachedSolver::Path::Woodbury : CachedSolver::Path::Direct;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CachedSolver::prepare(inst.A, 0.1, path));
  }
}
BENCHMARK(BM_Prepare)->Args({200, 0})->Args({200, 1})->Args({500, 0})->Args({500, 1});

void BM_AdmmStep(benchmark::State& state) {
  const auto inst = sparse_instance(static_cast<int>(state.range(0)), 0.9);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.lambda = 0.02;
  cfg.verify_identity = false;
  const auto solver = CachedSolver::prepare(inst.A, cfg.rho);
  const Vector aty = inst.A.transpose() * inst.y;
  AdmmState st = AdmmState::zeros(inst.N);
  for (auto _ : state) {
    st = admm_step(st, aty, cfg, SeparableRegularizer::l1(), solver);
    benchmark::DoNotOptimize(st.s.data());
  }
}
BENCHMARK(BM_AdmmStep)->Arg(200)->Arg(500)->Arg(1000);

struct Ensemble {
  ParticleEnsemble e;
  Vector h;
};

Ensemble make_ensemble(int particles) {
  RngStream rng(11);
  Ensemble out{init_ensemble(SignalPrior::bernoulli_gaussian(0.8), particles, rng), Vector()};
  out.h.resize(particles);
  for (auto& v : out.h) v = rng.normal();
  return out;
}

void BM_SaddleObjectiveDirect(benchmark::State& state) {
  const auto en = make_ensemble(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(saddle_objective(0.2, 0.05, en.e, en.h, 0.9, 0.001, 0.1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SaddleObjectiveDirect)->Arg(10000)->Arg(100000);

void BM_SaddleObjectiveMoments(benchmark::State& state) {
  const auto en = make_ensemble(100000);
  const auto m = ObjectiveMoments::from(en.e, en.h);
  for (auto _ : state) {
    benchmark::DoNotOptimize(saddle_objective(0.2, 0.05, m, 0.9, 0.001, 0.1));
  }
}
BENCHMARK(BM_SaddleObjectiveMoments);

void BM_SolveSaddle(benchmark::State& state) {
  const auto en = make_ensemble(static_cast<int>(state.range(0)));
  PredictionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_saddle(en.e, en.h, 0.9, 0.001, 0.1, cfg));
  }
}
BENCHMARK(BM_SolveSaddle)->Arg(10000)->Arg(100000);

void BM_Evolve(benchmark::State& state) {
  const auto en = make_ensemble(static_cast<int>(state.range(0)));
  const SaddlePoint sp{0.2, 0.05, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(en.e, sp, en.h, SeparableRegularizer::l1(), 0.02, 0.1, 0.9));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evolve)->Arg(100000);

}  // namespace
BENCHMARK_MAIN();
