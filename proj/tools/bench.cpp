// Wall-time comparison of the serial and OpenMP paths for the two
// embarrassingly parallel layers: refinement-sweep members and
// flux-surface sampling. One simulation is sequential by construction,
// so the speedup lives entirely at these layers.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fracsim/analysis.hpp"
#include "fracsim/scenarios.hpp"

using namespace fracsim;

namespace {

double seconds(void (*fn)(int), int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  fn(threads);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void bench_sweep(int threads) {
  ScenarioConfig cfg = default_spontaneous();
  const SweepResult sw = refinement_sweep(
      cfg, {1, 2, 4, 8, 16, 32}, {Scheme::ppu, Scheme::ppu_c, Scheme::ihu_c},
      64, threads);
  double sink = 0.0;
  for (const auto& e : sw.entries) sink += e.e2;
  (void)sink;
}

void bench_surface(int threads) {
  const Fluid fluid{1.0, 1.0, 0.0, 0.0};
  RockRegion region;
  region.id = RegionId::matrix;
  region.krw = {2};
  region.krn = {2};
  region.pc = CapillaryCurve(fit_pc_bounds(3.0, 4.0, 15.0, -15.0));
  region.porosity = 0.2;
  region.permeability = 1.0;
  const DiffusionMaxCache cache(region, fluid);
  double sink = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    const CsvTable t = flux_surface(Scheme::ihu_c, 0.5, 1.0, region, fluid,
                                    cache, 512, threads != 1);
    sink += t.columns[2][0];
  }
  (void)sink;
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
  std::puts("built without OpenMP; parallel timings equal serial");
#endif
  std::printf("%-24s %10s %10s %8s\n", "benchmark", "serial[s]",
              "parallel[s]", "speedup");

  const double sweep_serial = seconds(bench_sweep, 1);
  const double sweep_par = seconds(bench_sweep, max_threads);
  std::printf("%-24s %10.3f %10.3f %7.2fx\n", "refinement sweep",
              sweep_serial, sweep_par, sweep_serial / sweep_par);

  const double surf_serial = seconds(bench_surface, 1);
  const double surf_par = seconds(bench_surface, max_threads);
  std::printf("%-24s %10.3f %10.3f %7.2fx\n", "flux surface 512^2 x4",
              surf_serial, surf_par, surf_serial / surf_par);
  return 0;
}
