#include <doctest.h>

#include <cmath>
#include <set>

#include "bldcsim/csv.hpp"
#include "bldcsim/sim_engine.hpp"

using namespace bldcsim;

namespace {

SimConfig short_config(double t_end) {
    SimConfig cfg = default_config();
    cfg.t_end = t_end;
    return cfg;
}

}  // namespace

TEST_CASE("zero reference and zero load give an all-zero trace") {
    SimConfig cfg = short_config(0.5);
    cfg.reference.points = {{0.0, 0.0}};
    cfg.load.points = {{0.0, 0.0}};
    const Trace trace = run_simulation(cfg);
    for (const auto& r : trace.records) {
        CHECK(r.speed_rad == 0.0);
        CHECK(r.te == 0.0);
        CHECK(r.duty == 0.0);
        for (double i : r.currents) {
            CHECK(i == 0.0);
        }
        for (double e : r.emf_volts) {
            CHECK(e == 0.0);
        }
    }
}

TEST_CASE("row count is floor(t_end / log_step) + 1") {
    SimConfig cfg = short_config(1.0);
    const Trace trace = run_simulation(cfg);
    CHECK(trace.records.size() == 101);
    CHECK(trace.records.front().t == 0.0);
    CHECK(trace.records.back().t == doctest::Approx(1.0));
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        CHECK(trace.records[i].t - trace.records[i - 1].t == doctest::Approx(cfg.log_step));
    }
}

TEST_CASE("same config twice produces byte-identical CSV") {
    const SimConfig cfg = short_config(1.5);
    const std::string a = trace_to_csv(run_simulation(cfg));
    const std::string b = trace_to_csv(run_simulation(cfg));
    CHECK(a == b);
}

TEST_CASE("step-ratio violations are rejected") {
    SimConfig cfg = short_config(1.0);
    cfg.control_step = 3.3e-5;  // not a multiple of 2e-5
    CHECK_THROWS_AS(run_simulation(cfg), ConfigInvalid);

    cfg = short_config(1.0);
    cfg.log_step = 5e-4;
    cfg.control_step = 2e-4;  // 5e-4 / 2e-4 = 2.5
    CHECK_THROWS_AS(run_simulation(cfg), ConfigInvalid);

    cfg = short_config(1.0);
    cfg.pwm.carrier_hz = 5100.0;  // period not a multiple of the ode step
    CHECK_THROWS_AS(run_simulation(cfg), ConfigInvalid);

    cfg = short_config(-1.0);
    CHECK_THROWS_AS(run_simulation(cfg), ConfigInvalid);
}

TEST_CASE("unstable parameters raise NumericalDivergence") {
    SimConfig cfg = short_config(1.0);
    cfg.motor.phase_inductance = 1e-9;  // electrical pole far beyond the RK4 stability bound
    CHECK_THROWS_AS(run_simulation(cfg), NumericalDivergence);
}

TEST_CASE("phase current sum stays near zero and undriven phases carry none") {
    SimConfig cfg = short_config(2.0);
    const Trace trace = run_simulation(cfg);
    double max_current = 1.0;
    for (const auto& r : trace.records) {
        max_current = std::max({max_current, std::fabs(r.currents[0]), std::fabs(r.currents[1]),
                                std::fabs(r.currents[2])});
    }
    for (const auto& r : trace.records) {
        const double sum = r.currents[0] + r.currents[1] + r.currents[2];
        CHECK(std::fabs(sum) <= 1e-9 * max_current);
        // Exactly one phase floats per sector; its current is held at zero.
        int zero_phases = 0;
        for (double i : r.currents) {
            zero_phases += i == 0.0 ? 1 : 0;
        }
        CHECK(zero_phases >= 1);
    }
}

TEST_CASE("hall columns transition twice per signal per electrical revolution") {
    SimConfig cfg = short_config(3.0);
    cfg.reference.points = {{0.0, rpm_to_rad(600.0)}};
    cfg.load.points = {{0.0, 1.0}};
    cfg.log_step = cfg.control_step;  // fine logging resolves the sectors
    const Trace trace = run_simulation(cfg);

    // Collect revolution boundaries: entries into sector (1,0,0) from (1,0,1).
    std::vector<std::size_t> starts;
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const auto& prev = trace.records[i - 1];
        const auto& cur = trace.records[i];
        if (trace.records[i].t < 1.0) {
            continue;  // skip the spin-up
        }
        if (prev.hall == std::array<int, 3>{1, 0, 1} && cur.hall == std::array<int, 3>{1, 0, 0}) {
            starts.push_back(i);
        }
    }
    REQUIRE(starts.size() >= 3);
    for (std::size_t r = 0; r + 1 < starts.size(); ++r) {
        for (int signal = 0; signal < 3; ++signal) {
            int transitions = 0;
            for (std::size_t i = starts[r] + 1; i <= starts[r + 1]; ++i) {
                transitions +=
                    trace.records[i].hall[signal] != trace.records[i - 1].hall[signal] ? 1 : 0;
            }
            CHECK(transitions == 2);
        }
    }
}

TEST_CASE("steady state: speed holds the reference and torque balances the load") {
    SimConfig cfg = short_config(8.0);
    cfg.reference.points = {{0.0, rpm_to_rad(900.0)}};
    cfg.load.points = {{0.0, 4.0}};
    const Trace trace = run_simulation(cfg);
    const RunSummary s = summarize(trace);
    CHECK(s.steady_state_error < 0.01);
    const double expected = s.final_load_torque +
                            cfg.motor.viscous_friction * rpm_to_rad(s.final_speed_rpm);
    CHECK(s.final_te == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("emf_norm column is ternary and binary columns are binary") {
    SimConfig cfg = short_config(2.0);
    const Trace trace = run_simulation(cfg);
    for (const auto& r : trace.records) {
        for (double v : r.emf_norm) {
            CHECK((v == -1.0 || v == 0.0 || v == 1.0));
        }
        for (int h : r.hall) {
            CHECK((h == 0 || h == 1));
        }
        for (int p : r.pwm) {
            CHECK((p == 0 || p == 1));
        }
    }
}
