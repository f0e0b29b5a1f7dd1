#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "altproj/altproj.hpp"

using namespace altproj;

namespace {

void BM_Project(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(1);
  const Subspace s = random_subspace(rng, n, n / 2);
  const Vector x = rng.normal_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(project(s, x));
}
BENCHMARK(BM_Project)->Arg(8)->Arg(64)->Arg(256);

void BM_Intersect(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(2);
  const std::vector<Subspace> subs{random_subspace(rng, n, 3 * n / 4), random_subspace(rng, n, 3 * n / 4),
                                   random_subspace(rng, n, 3 * n / 4)};
  for (auto _ : state) benchmark::DoNotOptimize(intersect(subs));
}
BENCHMARK(BM_Intersect)->Arg(8)->Arg(64);

void BM_OperatorNorm(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(3);
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j) a.col(j) = rng.normal_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(a));
}
BENCHMARK(BM_OperatorNorm)->Arg(8)->Arg(64);

void BM_KaczmarzSweep(benchmark::State& state) {
  Rng rng(4);
  const RandomSystem rs = random_consistent_system(rng, state.range(0), 2 * state.range(0), 0.1);
  Vector x = Vector::Zero(rs.system.ambient_dim());
  for (auto _ : state) {
    for (std::size_t i = 0; i < rs.system.rows(); ++i) rs.system.project_row(i, x);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_KaczmarzSweep)->Arg(20)->Arg(200);

void BM_RulerRun(benchmark::State& state) {
  Rng rng(5);
  const std::vector<Subspace> subs{random_subspace(rng, 10, 6), random_subspace(rng, 10, 7),
                                   random_subspace(rng, 10, 5)};
  const Vector x0 = rng.normal_vector(10);
  RunConfig cfg;
  cfg.max_steps = static_cast<std::uint64_t>(state.range(0));
  cfg.storage = IterateStorage::none;
  for (auto _ : state) benchmark::DoNotOptimize(run(subs, Schedule::ruler(3), x0, cfg));
}
BENCHMARK(BM_RulerRun)->Arg(1000)->Arg(10000);

void BM_WordEvaluation(benchmark::State& state) {
  Rng rng(6);
  std::vector<Matrix> ops;
  for (Index d : {5, 6, 7}) ops.push_back(random_subspace(rng, 10, d).projector());
  const Word inner = Word::letter(2) * Word::letter(3, 40) * Word::letter(1);
  const Word w = Word::power(std::make_shared<const Word>(inner), static_cast<std::uint64_t>(state.range(0)));
  const Vector x = rng.normal_vector(10);
  for (auto _ : state) benchmark::DoNotOptimize(apply_word(w, ops, x));
}
BENCHMARK(BM_WordEvaluation)->Arg(1000)->Arg(1000000000);

}  // namespace

BENCHMARK_MAIN();
