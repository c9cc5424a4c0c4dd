#include <benchmark/benchmark.h>

#include "imitation/dynamics.hpp"
#include "imitation/equilibria.hpp"
#include "imitation/games.hpp"
#include "imitation/mechanisms.hpp"
#include "imitation/rng.hpp"

namespace {

using namespace imitation;

CommunityNetwork figure_network() {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, 0.2, 0.2, 1.0;
  return CommunityNetwork({"a", "b"}, Eigen::Vector2d(0.7, 0.3), w);
}

SystemState interior_start(const CommunityNetwork& net, int n_actions,
                           std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n_actions, net.size());
  for (int h = 0; h < net.size(); ++h) {
    x.col(h) = net.eta()[h] * rng.simplex(n_actions);
  }
  return SystemState(x, net);
}

void BM_VectorField(benchmark::State& state) {
  const auto net = figure_network();
  const auto game = congestion_game();
  const auto mech = sigmoid_mechanism(game, 1.0);
  const auto x = interior_start(net, 3, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vector_field(x, game, net, mech));
  }
}
BENCHMARK(BM_VectorField);

void BM_PopulationDerivative(benchmark::State& state) {
  const auto net = figure_network();
  const auto game = congestion_game();
  const auto mech = sigmoid_mechanism(game, 1.0);
  const auto x = interior_start(net, 3, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(population_derivative(x, game, net, mech));
  }
}
BENCHMARK(BM_PopulationDerivative);

void BM_Integrate(benchmark::State& state) {
  const auto net = figure_network();
  const auto game = congestion_game();
  const auto mech = sigmoid_mechanism(game, 1.0);
  const auto x0 = interior_start(net, 3, 7);
  IntegratorSettings settings;
  settings.t_end = static_cast<double>(state.range(0));
  settings.record_every = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(x0, game, net, mech, settings));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(settings.t_end / 0.01));
}
BENCHMARK(BM_Integrate)->Arg(1)->Arg(10)->Arg(40);

void BM_GridOracle(benchmark::State& state) {
  const auto net = figure_network();
  const auto game = congestion_game();
  const auto mech = sigmoid_mechanism(game, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        find_equilibria_numeric(game, net, mech, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_GridOracle)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
