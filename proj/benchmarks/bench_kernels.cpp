#include <benchmark/benchmark.h>

#include <random>

#include "boomprop/analysis.hpp"
#include "boomprop/exprk.hpp"
#include "boomprop/spectral.hpp"
#include "boomprop/splitting.hpp"
#include "boomprop/weno5.hpp"

using namespace boomprop;

namespace {

DomainConfig preset(int set) { return grid_set(set); }

Field2D nwave(const DomainConfig& c, RhoBoundary boundary) {
  const auto axes = build_axes(c, boundary);
  return initial_nwave(axes.rho, axes.theta, c.absorption, c.nonlinearity);
}

void BM_Diffraction(benchmark::State& state, DiffractionSum mode) {
  const auto c = preset(static_cast<int>(state.range(0)));
  const auto v = nwave(c, RhoBoundary::neumann);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_diffraction_cn(v, c.d_sigma(), c.d_rho(), c.d_theta(), mode));
  }
}
BENCHMARK_CAPTURE(BM_Diffraction, direct, DiffractionSum::direct)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Diffraction, running, DiffractionSum::running)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Transform(benchmark::State& state) {
  const auto c = preset(static_cast<int>(state.range(0)));
  const auto n_rho = static_cast<std::size_t>(c.n_rho);
  const auto n_theta = static_cast<std::size_t>(c.n_theta);
  SpectralTransform<double> t(n_rho, n_theta);
  const auto v = nwave(c, RhoBoundary::periodic);
  std::vector<std::complex<double>> spec(n_rho * t.theta_modes());
  std::vector<double> back(v.size());
  for (auto _ : state) {
    t.forward(v.data(), spec.data());
    t.inverse(spec.data(), back.data());
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_Transform)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Weno(benchmark::State& state) {
  const auto c = preset(static_cast<int>(state.range(0)));
  const auto v = nwave(c, RhoBoundary::periodic);
  const auto n_rho = static_cast<std::size_t>(c.n_rho);
  std::vector<double> up(n_rho, 0.01), uq(n_rho, 0.01), dq(n_rho, 0.0);
  std::vector<double> b(v.size()), scratch(v.size());
  for (auto _ : state) {
    weno5_b<double>(v.values(), n_rho, static_cast<std::size_t>(c.n_theta), {up, uq, dq},
                    c.nonlinearity, c.d_rho(), c.d_theta(), b, scratch);
    benchmark::DoNotOptimize(b.data());
  }
}
BENCHMARK(BM_Weno)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ExpRk22Step(benchmark::State& state) {
  auto c = preset(static_cast<int>(state.range(0)));
  const auto fields = zero_fields(static_cast<std::size_t>(c.n_sigma) + 1,
                                  static_cast<std::size_t>(c.n_rho) + 1);
  ExpRkSolver<double> solver(c, fields, {});
  solver.set_initial(nwave(c, RhoBoundary::periodic));
  for (auto _ : state) {
    if (solver.sigma_index() >= c.n_sigma) solver.set_initial(nwave(c, RhoBoundary::periodic));
    solver.step();
  }
}
BENCHMARK(BM_ExpRk22Step)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LieStep(benchmark::State& state) {
  auto c = preset(static_cast<int>(state.range(0)));
  const auto fields = zero_fields(static_cast<std::size_t>(c.n_sigma) + 1,
                                  static_cast<std::size_t>(c.n_rho) + 1);
  SplittingSolver solver(c, fields, {});
  SplittingState s{nwave(c, RhoBoundary::neumann), 0};
  for (auto _ : state) {
    if (s.sigma_index >= c.n_sigma) s = {nwave(c, RhoBoundary::neumann), 0};
    s = solver.lie_step(s);
  }
}
BENCHMARK(BM_LieStep)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
