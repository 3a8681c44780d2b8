#include <benchmark/benchmark.h>

#include <sipstab/builtins.hpp>
#include <sipstab/minnorm.hpp>
#include <sipstab/stability.hpp>

#include <random>

using namespace sipstab;

namespace {

Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double shift) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng) + shift;
  }
  return m;
}

void BM_MinNormPoint(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Matrix P = gaussian(rng, 3, state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(min_norm_point(P));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinNormPoint)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_ConeDistance(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Matrix G = gaussian(rng, 4, state.range(0), 0.0);
  const Vector target = gaussian(rng, 4, 1, 0.0).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(cone_distance(G, target));
}
BENCHMARK(BM_ConeDistance)->RangeMultiplier(4)->Range(16, 4096);

void BM_LipBoundExample1(benchmark::State& state) {
  const auto s = make_builtin("example1_countable", {.N = static_cast<int>(state.range(0))});
  const auto inst = s.instance();
  const Vector xbar = s.probes.front().point;
  for (auto _ : state) benchmark::DoNotOptimize(lip_bound(inst, xbar));
}
BENCHMARK(BM_LipBoundExample1)->Arg(10)->Arg(100)->Arg(1000);

void BM_LipBoundParabola(benchmark::State& state) {
  const auto s = make_builtin("parabola");
  const auto inst = s.instance();
  const Vector xbar = s.probes.front().point;
  for (auto _ : state) benchmark::DoNotOptimize(lip_bound(inst, xbar));
}
BENCHMARK(BM_LipBoundParabola);

void BM_DistanceDual(benchmark::State& state) {
  const auto s = make_builtin("unit_disk");
  const auto inst = s.instance();
  const Parameter p = s.parameter(s.probes.front());
  Vector x = Vector::Constant(inst.system.dimension(), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(distance_dual(inst, p, x));
}
BENCHMARK(BM_DistanceDual);

}  // namespace
BENCHMARK_MAIN();
