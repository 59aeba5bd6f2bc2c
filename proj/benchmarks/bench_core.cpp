// Microbenchmarks for the kernels and the full solve.
#include <benchmark/benchmark.h>

#include "gtrs/cg.hpp"
#include "gtrs/eigensolver.hpp"
#include "gtrs/interval.hpp"
#include "gtrs/oracle.hpp"
#include "gtrs/probgen.hpp"
#include "gtrs/rng.hpp"
#include "gtrs/solver.hpp"

using namespace gtrs;

namespace {

SparseSymmetric bench_spd(Index n, double density, std::uint64_t seed) {
  return probgen::rand_sparse_sym(n, density, 10.0, seed);
}

void BM_Matvec(benchmark::State& state) {
  const Index n = state.range(0);
  SparseSymmetric m = bench_spd(n, 1e-3, 11);
  Rng rng(7);
  Vector x = rng.normal_vector(n);
  Vector y(n);
  for (auto _ : state) {
    m.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * m.stored_nonzeros());
}
BENCHMARK(BM_Matvec)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_CgSolve(benchmark::State& state) {
  const Index n = state.range(0);
  SparseSymmetric m = bench_spd(n, 1e-3, 13);
  LinearOperator op = make_operator(m);
  Rng rng(8);
  Vector rhs = rng.normal_vector(n);
  for (auto _ : state) {
    CgResult res = cg_solve(op, rhs, 1e-10, 10 * n);
    benchmark::DoNotOptimize(res.x.data());
  }
}
BENCHMARK(BM_CgSolve)->Arg(1000)->Arg(10000);

void BM_SmallestPencilEigenvalue(benchmark::State& state) {
  const Index n = state.range(0);
  SparseSymmetric a = bench_spd(n, 1e-3, 17);
  SparseSymmetric b = probgen::rand_sparse_sym(n, 1e-3, std::nullopt, 19);
  for (auto _ : state) {
    EigOptions opts;
    EigResult eig = min_gen_eig(make_operator(b), make_operator(a), 1, opts);
    benchmark::DoNotOptimize(eig.values.data());
  }
}
BENCHMARK(BM_SmallestPencilEigenvalue)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void bench_full_solve(benchmark::State& state, probgen::CaseRequest kind) {
  const Index n = state.range(0);
  probgen::GenSpec spec;
  spec.n = n;
  spec.density = 1e-2;
  spec.cond = 10.0;
  spec.case_kind = kind;
  spec.class_kind = probgen::ClassKind::Class1;
  spec.seed = 23;
  probgen::GenArtifact art = probgen::generate(spec);
  for (auto _ : state) {
    GtrsOutcome out = solve(art.problem);
    benchmark::DoNotOptimize(out.lambda_star);
  }
}

void BM_SolveEasy(benchmark::State& state) {
  bench_full_solve(state, probgen::CaseRequest::Easy);
}
void BM_SolveHardCase2(benchmark::State& state) {
  bench_full_solve(state, probgen::CaseRequest::Hard2);
}
BENCHMARK(BM_SolveEasy)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveHardCase2)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DenseOracle(benchmark::State& state) {
  const Index n = state.range(0);
  probgen::GenSpec spec;
  spec.n = n;
  spec.density = 0.1;
  spec.cond = 10.0;
  spec.case_kind = probgen::CaseRequest::Easy;
  spec.class_kind = probgen::ClassKind::Class1;
  spec.seed = 29;
  probgen::GenArtifact art = probgen::generate(spec);
  for (auto _ : state) {
    oracle::OracleResult res = oracle::dense_solve(art.problem);
    benchmark::DoNotOptimize(res.outcome.lambda_star);
  }
}
BENCHMARK(BM_DenseOracle)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
