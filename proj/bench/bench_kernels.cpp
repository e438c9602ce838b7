#include <benchmark/benchmark.h>

#include "homvcp/instances.hpp"
#include "homvcp/kernels.hpp"

using namespace homvcp;

namespace {

GenCone bench_cone() {
  std::vector<Vec> pts;
  for (int i = -20; i <= 20; ++i) {
    Vec p(2);
    p << 0.1 * i, 0.01 * i * i - 1.0;
    pts.push_back(p);
  }
  Vec a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  return GenCone::from_points_and_directions(pts, {a, b});
}

const std::vector<Vec>& rays(std::size_t n) {
  static std::vector<Vec> all = sphere_sample(3, 1 << 16, 1);
  static std::vector<Vec> cut;
  cut.assign(all.begin(), all.begin() + static_cast<long>(n));
  return cut;
}

template <Execution E>
void BM_RayDistances(benchmark::State& state) {
  const GenCone cone = bench_cone();
  const auto& rs = rays(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ray_distances(rs, cone, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution E>
void BM_WorstRay(benchmark::State& state) {
  const GenCone cone = bench_cone();
  const auto& rs = rays(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(worst_ray(rs, cone, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution E>
void BM_ProjectBatch(benchmark::State& state) {
  const auto& prob = parabola2d()->problem();
  const auto vs = sphere_sample(3, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_batch(prob, vs, {}, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RayDistances<Execution::Serial>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RayDistances<Execution::Parallel>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WorstRay<Execution::Serial>)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WorstRay<Execution::Parallel>)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectBatch<Execution::Serial>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectBatch<Execution::Parallel>)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
