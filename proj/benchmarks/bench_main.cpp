#include "schottky/degeneration.hpp"
#include "schottky/periods.hpp"
#include "schottky/tau.hpp"
#include "schottky/theta.hpp"

#include <benchmark/benchmark.h>

using namespace schottky;

namespace {

SchottkyGroup mcurve_group(int g, double y)
{
    const CurveConfig cfg = mcurve_params(g, 1, 2.0, y);
    return instantiate_group(cfg.graph, cfg.params);
}

void BM_PeriodMatrix(benchmark::State& state)
{
    const int g = static_cast<int>(state.range(0));
    const SchottkyGroup group = mcurve_group(g, g == 3 ? 0.02 : 0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(period_matrix(group, TruncationPolicy{}));
}
BENCHMARK(BM_PeriodMatrix)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LaurentData(benchmark::State& state)
{
    const SchottkyGroup group = mcurve_group(2, 0.01);
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(laurent_data(group, SpherePoint(-3.0), M, {}));
}
BENCHMARK(BM_LaurentData)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Theta(benchmark::State& state)
{
    const int g = static_cast<int>(state.range(0));
    const CurveTau ct = curve_tau(mcurve_params(g, 1, 2.0, g == 3 ? 0.02 : 0.01), 3, Characteristic::zero(g));
    const Eigen::VectorXcd z = Eigen::VectorXcd::Constant(g, cplx(0.3, 0.1));
    for (auto _ : state)
        benchmark::DoNotOptimize(theta(ct.tau.Z, z, ThetaPolicy{}));
}
BENCHMARK(BM_Theta)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_KpResidual(benchmark::State& state)
{
    const int g = static_cast<int>(state.range(0));
    const CurveTau ct = curve_tau(mcurve_params(g, 1, 2.0, 0.01), 3, Characteristic::zero(g));
    for (auto _ : state)
        benchmark::DoNotOptimize(kp_residual(ct.tau, KpGrid{}));
}
BENCHMARK(BM_KpResidual)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SolitonResidual(benchmark::State& state)
{
    const SolitonData s = soliton_from_config(mcurve_params(2, 1, 2.0, 0.01), {0, 0}, {0.3, -0.2}, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(soliton_kp_residual(s, KpGrid{}));
}
BENCHMARK(BM_SolitonResidual)->Unit(benchmark::kMillisecond);

void BM_DegenerationHalfInteger(benchmark::State& state)
{
    DegenerationScenario s;
    s.base = mcurve_params(2, 1, 2.0, 0.01);
    s.pinch = "2";
    s.alpha = Eigen::VectorXcd::Zero(2);
    s.beta = Eigen::Vector2d(0.1, 0.5);
    const auto ts = default_time_samples(3, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(degeneration_check(s, ts));
}
BENCHMARK(BM_DegenerationHalfInteger)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
