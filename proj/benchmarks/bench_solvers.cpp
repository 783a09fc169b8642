#include <benchmark/benchmark.h>

#include "rqlab/envs.hpp"
#include "rqlab/mcts.hpp"
#include "rqlab/residual.hpp"
#include "rqlab/soft_oracle.hpp"

using namespace rqlab;

namespace {

const char* const kEnvs[] = {"centering-chain", "discrete-mountain-car", "grid-highway", "grid-parking"};

BuiltEnv env_at(const benchmark::State& state) {
  EnvSpec spec;
  spec.name = kEnvs[state.range(0)];
  return make_env(spec);
}

PolicyTable prior_of(const DiscreteMdp& m) {
  return boltzmann_policy(soft_value_iteration(m, RewardSelector::basic(), {}), 1.0);
}

void BM_SoftValueIteration(benchmark::State& state) {
  const auto built = env_at(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(soft_value_iteration(*built.mdp, RewardSelector::combined(1.0), {}));
  }
  state.SetLabel(built.spec.name);
  state.counters["states"] = static_cast<double>(built.mdp->n_states());
}
BENCHMARK(BM_SoftValueIteration)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_ResidualIteration(benchmark::State& state) {
  const auto built = env_at(state);
  const auto prior = prior_of(*built.mdp);
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual_soft_q_iteration(*built.mdp, prior, {}));
  }
  state.SetLabel(built.spec.name);
}
BENCHMARK(BM_ResidualIteration)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// Short runs: the per-step cost is what matters here, not convergence.
void BM_ResidualTd(benchmark::State& state) {
  auto built = env_at(state);
  const auto prior = prior_of(*built.mdp);
  TdLearnerParams p;
  p.episodes = 2000;
  std::size_t steps = 0;
  for (auto _ : state) {
    Rng rng(1);
    const auto r = residual_soft_q_learning(built.env, prior, {}, p, rng);
    steps += r.env_steps;
  }
  state.SetLabel(built.spec.name);
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ResidualTd)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MctsPlan(benchmark::State& state) {
  auto built = env_at(state);
  const auto prior = prior_of(*built.mdp);
  Rng reset(0);
  const StateId root = built.env.reset(reset);
  MctsParams p;
  p.iter_max = static_cast<int>(state.range(1));
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan(root, *built.mdp, prior, p, rng).action);
  }
  state.SetLabel(built.spec.name);
}
BENCHMARK(BM_MctsPlan)->ArgsProduct({{0, 2}, {150, 1000}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
