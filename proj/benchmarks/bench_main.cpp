#include <benchmark/benchmark.h>

#include <vector>

#include "conbqa/coding.hpp"
#include "conbqa/objectives.hpp"
#include "conbqa/qubo.hpp"
#include "conbqa/regression.hpp"
#include "conbqa/solvers.hpp"

using namespace conbqa;

namespace {

struct Problem {
  Codebook codebook;
  std::vector<BitVector> zs;
  std::vector<double> ys;
};

// Hartmann-6 data encoded with an m-bit codebook, as seen inside one iteration.
Problem make_problem(std::size_t m, std::size_t n) {
  Rng rng(17);
  Problem p{generate_codebook(rng, 6, 2, m), {}, {}};
  const auto f = hartmann6();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform();
    p.zs.push_back(encode(p.codebook, x));
    p.ys.push_back(f.evaluate(x));
  }
  p.ys = minmax_normalize(p.ys);
  return p;
}

void BM_Encode(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), 1);
  Rng rng(3);
  std::vector<double> x(6);
  for (auto _ : state) {
    for (auto& v : x) v = rng.uniform();
    benchmark::DoNotOptimize(encode(p.codebook, x));
  }
}
BENCHMARK(BM_Encode)->Arg(60)->Arg(200);

void BM_FitNnls(benchmark::State& state) {
  const auto p = make_problem(60, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_nnls(p.zs, p.ys));
}
BENCHMARK(BM_FitNnls)->Arg(15)->Arg(65)->Arg(115);

void BM_SolveSa(benchmark::State& state) {
  const auto p = make_problem(60, 40);
  const auto q = build_qubo(fit_nnls(p.zs, p.ys), p.codebook);
  SaParams params;
  params.num_reads = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sa(q, rng, params));
}
BENCHMARK(BM_SolveSa)->Arg(1)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveGreedy(benchmark::State& state) {
  const auto p = make_problem(60, 40);
  const auto q = build_qubo(fit_nnls(p.zs, p.ys), p.codebook);
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_greedy(q, rng));
}
BENCHMARK(BM_SolveGreedy)->Unit(benchmark::kMillisecond);

void BM_SolveExhaustive(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), 20);
  const auto q = build_qubo(fit_nnls(p.zs, p.ys), p.codebook);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exhaustive(q));
}
BENCHMARK(BM_SolveExhaustive)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
