#include <benchmark/benchmark.h>

#include "rtflab/chars.hpp"
#include "rtflab/engine.hpp"
#include "rtflab/local.hpp"

using namespace rtflab;

static void BM_LocalMul(benchmark::State& state) {
  const FqField& F = FqField::get(3, 2);
  LocalElem a = LocalElem::from_coeffs(F, -2, {1, 4, 2, 7, 1, 3});
  LocalElem b = LocalElem::from_coeffs(F, 1, {5, 1, 0, 2, 8});
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_LocalMul);

static void BM_LocalInv(benchmark::State& state) {
  const FqField& F = FqField::get(5, 1);
  LocalElem a = LocalElem::from_coeffs(F, -1, {2, 3, 0, 1, 4});
  for (auto _ : state) benchmark::DoNotOptimize(a.inv(32));
}
BENCHMARK(BM_LocalInv);

static void BM_GaussSum(benchmark::State& state) {
  const FqField& F = FqField::get(5, 1);
  MultiplicativeCharacter chi;
  chi.F = &F;
  chi.e = 1;
  chi.lam = 1;
  AdditiveCharacter psi(F, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gauss_sum(chi, psi, -5));
}
BENCHMARK(BM_GaussSum);

static void BM_OrbitalSDet(benchmark::State& state) {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  int m = static_cast<int>(state.range(0));
  LocalElem x = LocalElem::from_coeffs(F, -2, {2, 1, 0, 1});
  TestFnS f = TestFnS::integral_det(m);
  for (auto _ : state) benchmark::DoNotOptimize(orbital_S_x(E, f, x));
}
BENCHMARK(BM_OrbitalSDet)->Arg(0)->Arg(2)->Arg(4);

static void BM_OrbitalTraceBall(benchmark::State& state) {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::RamifiedTame);
  LocalElem x = LocalElem::from_coeffs(F, 2, {1, 2});
  TestFnS f = TestFnS::klxi(3, LocalElem::one(F), 2, false);
  for (auto _ : state) benchmark::DoNotOptimize(orbital_S_x(E, f, x));
}
BENCHMARK(BM_OrbitalTraceBall);

static void BM_OrbitalGCongruence(benchmark::State& state) {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  LocalElem eps = LocalElem::t_pow(F, 1);
  LocalElem x = LocalElem::from_coeffs(F, 5, {1, 0, 2});
  TestFnG f = TestFnG::keps(1);
  for (auto _ : state) benchmark::DoNotOptimize(orbital_G_x(E, eps, f, x));
}
BENCHMARK(BM_OrbitalGCongruence);

BENCHMARK_MAIN();
