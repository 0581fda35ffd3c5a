#include "mvgl/bipartite.hpp"
#include "mvgl/solver.hpp"
#include "mvgl/tensor.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using mvgl::Index;

Eigen::MatrixXd simplex_rows(std::mt19937_64& rng, Index n, Index m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd z(n, m);
  for (Index i = 0; i < z.size(); ++i) z.data()[i] = u(rng) < 0.8 ? 0.0 : u(rng);
  for (Index i = 0; i < n; ++i) {
    z(i, i % m) += 1e-3;
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

mvgl::GraphTensor graph_tensor(std::mt19937_64& rng, Index n, Index views, Index m) {
  mvgl::GraphTensor z(n, views, m);
  for (Index v = 0; v < views; ++v) z.lateral(v) = simplex_rows(rng, n, m);
  return z;
}

// Args: N, M with V = 3.
void BM_ProxSchattenP(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const mvgl::GraphTensor z = graph_tensor(rng, state.range(0), 3, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mvgl::prox_schatten_p(z, 0.1, 0.4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxSchattenP)->Args({1000, 100})->Args({2000, 100})->Args({4000, 100})->Args({2000, 200})
    ->Unit(benchmark::kMillisecond);

void BM_UpdateEmbedding(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd zbar = simplex_rows(rng, state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mvgl::update_embedding(zbar, 5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UpdateEmbedding)->Args({1000, 100})->Args({2000, 100})->Args({4000, 100})->Args({2000, 200})
    ->Unit(benchmark::kMillisecond);

void BM_UpdateGraphs(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Index n = state.range(0), m = state.range(1), views = 3;
  const mvgl::GraphTensor z = graph_tensor(rng, n, views, m);
  const mvgl::GraphTensor y(n, views, m);
  std::vector<mvgl::DistanceBlock> dists;
  for (Index v = 0; v < views; ++v) dists.push_back(Eigen::MatrixXd::Random(n, m).cwiseAbs());
  const mvgl::EmbeddingUpdate emb = mvgl::update_embedding(mvgl::shared_graph(z), 5);
  const std::vector<double> alpha(views, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mvgl::update_graphs(dists, z, y, emb.embedding, emb.degrees, z, alpha, 1.0, 10.0));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_UpdateGraphs)->Args({1000, 100})->Args({2000, 100})->Args({4000, 100})->Args({2000, 200})
    ->Unit(benchmark::kMillisecond);

void BM_ProjectSimplex(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(state.range(0));
  for (Index i = 0; i < v.size(); ++i) v(i) = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(mvgl::project_simplex(v));
}
BENCHMARK(BM_ProjectSimplex)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
