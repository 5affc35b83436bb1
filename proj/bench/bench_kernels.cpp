// Serial reference vs OpenMP kernels on the default experiment grids.

#include <benchmark/benchmark.h>

#include <vector>

#include "otcc/density.hpp"
#include "otcc/grid.hpp"
#include "otcc/kernels.hpp"
#include "otcc/tessellation.hpp"

namespace {

using otcc::kernels::Backend;

struct Scene {
  otcc::Grid grid;
  otcc::GridDensity density;
  otcc::SwarmState state;
};

Scene make_scene(std::size_t dim) {
  if (dim == 1) {
    otcc::Grid grid({{-10.0}, {10.0}}, {2000});
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(-3.0 + 0.15 * i);
    Scene s{grid, {}, otcc::SwarmState(1, x)};
    s.density = otcc::discretize(otcc::Density::gaussian({0.0}, {3.0}), s.grid);
    return s;
  }
  otcc::Grid grid({{-10.0, -10.0}, {10.0, 10.0}}, {200, 200});
  std::vector<double> x;
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 5; ++i) {
      x.push_back(-8.0 + 1.5 * i);
      x.push_back(-8.0 + 1.5 * j);
    }
  }
  Scene s{grid, {}, otcc::SwarmState(2, x)};
  s.density = otcc::discretize(
      otcc::Density::mixture({0.5, 0.5}, {{{-5.0, -5.0}, {4.0, 4.0}}, {{5.0, 5.0}, {4.0, 4.0}}}),
      s.grid);
  return s;
}

void BM_Assign(benchmark::State& st, std::size_t dim, Backend backend) {
  Scene scene = make_scene(dim);
  scene.density.grid = &scene.grid;
  for (auto _ : st) {
    auto owner = otcc::assign(scene.grid, scene.state, backend);
    benchmark::DoNotOptimize(owner.data());
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * scene.grid.num_cells()));
}

void BM_Tessellate(benchmark::State& st, std::size_t dim, Backend backend) {
  Scene scene = make_scene(dim);
  scene.density.grid = &scene.grid;
  for (auto _ : st) {
    auto tess = otcc::tessellate(scene.density, scene.state, false, backend);
    benchmark::DoNotOptimize(tess.stats.mass.data());
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * scene.grid.num_cells()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Assign, serial_1d, 1, Backend::kSerial);
BENCHMARK_CAPTURE(BM_Assign, parallel_1d, 1, Backend::kParallel);
BENCHMARK_CAPTURE(BM_Assign, serial_2d, 2, Backend::kSerial);
BENCHMARK_CAPTURE(BM_Assign, parallel_2d, 2, Backend::kParallel);
BENCHMARK_CAPTURE(BM_Tessellate, serial_1d, 1, Backend::kSerial);
BENCHMARK_CAPTURE(BM_Tessellate, parallel_1d, 1, Backend::kParallel);
BENCHMARK_CAPTURE(BM_Tessellate, serial_2d, 2, Backend::kSerial);
BENCHMARK_CAPTURE(BM_Tessellate, parallel_2d, 2, Backend::kParallel);

BENCHMARK_MAIN();
