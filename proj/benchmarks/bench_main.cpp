#include <benchmark/benchmark.h>

#include <random>

#include "toricwall/cohomology_k.hpp"
#include "toricwall/gkz.hpp"
#include "toricwall/mutation_stokes.hpp"

using namespace tw;

namespace {

VectorSet bl_line() {
  return VectorSet::make({4, {}}, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, -1, -1, -1}, {1, 1, 1, 0}});
}

void BM_EnumerateFans(benchmark::State& state) {
  auto S = bl_line();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_adapted_fans(S));
}
BENCHMARK(BM_EnumerateFans)->Unit(benchmark::kMillisecond);

void BM_MoriCones(benchmark::State& state) {
  auto f = enumerate_adapted_fans(bl_line()).front();
  for (auto _ : state) benchmark::DoNotOptimize(extended_mori_cones(f));
}
BENCHMARK(BM_MoriCones)->Unit(benchmark::kMillisecond);

void BM_CriticalPoints(benchmark::State& state) {
  auto S = bl_line();
  QMat basis;
  for (const auto& r : extended_sequences(S).L) basis.push_back(to_q(r));
  auto F = assemble_potential(S, basis, {std::log(14.3), std::log(0.7)});
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(critical_points(F, rng));
}
BENCHMARK(BM_CriticalPoints)->Unit(benchmark::kMillisecond);

void BM_ChowRingAndGamma(benchmark::State& state) {
  auto f = enumerate_adapted_fans(bl_line()).front();
  for (auto _ : state) {
    auto R = ChowRing::build(f);
    benchmark::DoNotOptimize(gamma_class(R));
  }
}
BENCHMARK(BM_ChowRingAndGamma)->Unit(benchmark::kMillisecond);

void BM_GramHrr(benchmark::State& state) {
  auto R = ChowRing::build(enumerate_adapted_fans(bl_line()).front());
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(-3, 3);
  std::vector<KClass> cls;
  for (int i = 0; i < state.range(0); ++i) {
    std::vector<long> a(6, 0);
    for (int b : R.fan().rays) a[b] = d(rng);
    cls.push_back(line_bundle(R, a));
  }
  for (auto _ : state) benchmark::DoNotOptimize(gram_hrr(R, cls));
}
BENCHMARK(BM_GramHrr)->Arg(9)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Mutate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ZMat g(n, ZVec(n, 0));
  for (int i = 0; i < n; ++i) {
    g[i][i] = 1;
    for (int j = i + 1; j < n; ++j) g[i][j] = (i * 7 + j * 3) % 5 - 2;
  }
  std::vector<cplx> u;
  for (int i = 0; i < n; ++i) u.push_back(cplx(0, -i));
  auto m = MarkedReflectionSystem::abstract(g, {}, u, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(mutate(m, 0, n - 1, Direction::Right));
}
BENCHMARK(BM_Mutate)->Arg(9)->Arg(32);

void BM_GkzAnnihilation(benchmark::State& state) {
  auto f = enumerate_adapted_fans(bl_line()).front();
  auto mori = extended_mori_cones(f);
  QVec lam = scale(mori.ne_generators.front(), Q(lcm_denominators(mori.ne_generators.front())));
  auto P = gkz_relation(f, QVec(4, Q(0)), lam);
  for (auto _ : state) benchmark::DoNotOptimize(check_annihilation(f, P));
}
BENCHMARK(BM_GkzAnnihilation)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
