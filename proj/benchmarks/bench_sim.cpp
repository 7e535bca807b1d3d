#include <benchmark/benchmark.h>

#include "bldcsim/csv.hpp"
#include "bldcsim/sim_engine.hpp"

using namespace bldcsim;

namespace {

SimConfig short_config(double t_end) {
    SimConfig cfg = default_config();
    cfg.t_end = t_end;
    cfg.reference.points = {{0.0, rpm_to_rad(1500.0)}};
    cfg.load.points = {{0.0, 4.0}};
    return cfg;
}

void BM_SimulatedSecond(benchmark::State& state) {
    const SimConfig cfg = short_config(1.0);
    for (auto _ : state) {
        Trace trace = run_simulation(cfg);
        benchmark::DoNotOptimize(trace.records.data());
    }
}
BENCHMARK(BM_SimulatedSecond)->Unit(benchmark::kMillisecond);

void BM_DerivativeEval(benchmark::State& state) {
    const MotorParams params;
    MotorState s;
    s.phase_currents = {12.0, -12.0, 0.0};
    s.electrical_angle = 1.3;
    s.mechanical_speed = 200.0;
    PhaseVoltages pv;
    pv.line_to_neutral = {80.0, -80.0, 0.0};
    pv.driven = {true, true, false};
    for (auto _ : state) {
        StateDerivative d = derivatives(s, pv, 6.0, params);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_DerivativeEval);

void BM_TraceExport(benchmark::State& state) {
    SimConfig cfg = short_config(2.0);
    cfg.log_step = 1e-3;
    const Trace trace = run_simulation(cfg);
    for (auto _ : state) {
        std::string csv = trace_to_csv(trace);
        benchmark::DoNotOptimize(csv.data());
    }
}
BENCHMARK(BM_TraceExport)->Unit(benchmark::kMillisecond);

}  // namespace
