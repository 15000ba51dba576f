#include <benchmark/benchmark.h>

#include "dnsim/stepper.hpp"

using namespace dnsim;

namespace {

SimConfig default_like(int n) {
    const Grid g(n);
    EnergyModel energy =
        EnergyModel::preset(g, EnergyModel::Beta1::PPower, EnergyModel::Beta0::Quadratic, 3.0);
    SimConfig cfg(g, std::move(energy), MonotoneGraph::sign_plus_linear(1.0, 0.1),
                  NoiseModel::superposition(g, 8, 0.5, 1.5, NoiseModel::Phi::Tanh),
                  ForcingModel::affine(1.0, 0.0, 0.0, 0.0, 0.0));
    cfg.lambda = 0.25;
    cfg.dt = 0.004;
    cfg.T = 0.1;
    cfg.u0 = make_sine_init(g, 1, 1.0, 3.0);
    return cfg;
}

void ResolventClosedForm(benchmark::State& state) {
    const MonotoneGraph g = MonotoneGraph::sign_plus_linear(1.0, 0.1);
    double y = 0.0;
    for (auto _ : state) {
        y += 1e-6;
        benchmark::DoNotOptimize(g.resolvent(0.25, y));
    }
}
BENCHMARK(ResolventClosedForm);

void ResolventBisection(benchmark::State& state) {
    const MonotoneGraph g = MonotoneGraph::power_law(3.0, 1.0);
    double y = 0.0;
    for (auto _ : state) {
        y += 1e-6;
        benchmark::DoNotOptimize(g.resolvent(0.25, y));
    }
}
BENCHMARK(ResolventBisection);

void InverseShifted(benchmark::State& state) {
    const MonotoneGraph g = MonotoneGraph::sign_plus_linear(1.0, 0.1);
    double z = 0.0;
    for (auto _ : state) {
        z += 1e-6;
        benchmark::DoNotOptimize(g.inverse_shifted(0.25, z));
    }
}
BENCHMARK(InverseShifted);

void ProxNewton(benchmark::State& state) {
    const SimConfig cfg = default_like(static_cast<int>(state.range(0)));
    const GridFn x = make_sine_init(cfg.grid, 2, 1.5, 3.0);
    for (auto _ : state) benchmark::DoNotOptimize(cfg.energy.prox(0.25, x));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ProxNewton)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void DriftEvaluation(benchmark::State& state) {
    const SimConfig cfg = default_like(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(drift(cfg, 0.0, cfg.u0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(DriftEvaluation)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void SimulatePath(benchmark::State& state) {
    const SimConfig cfg = default_like(32);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg, 0));
}
BENCHMARK(SimulatePath);

void TraceCorrection(benchmark::State& state) {
    const SimConfig cfg = default_like(32);
    const GridFn x = make_sine_init(cfg.grid, 1, 1.0, 3.0);
    const GridFn prox = cfg.energy.prox(cfg.lambda, x);
    const auto modes = cfg.noise.mode_vectors(0.0, prox);
    for (auto _ : state)
        benchmark::DoNotOptimize(cfg.energy.trace_correction_from(cfg.lambda, prox, modes));
}
BENCHMARK(TraceCorrection);

} // namespace

BENCHMARK_MAIN();
