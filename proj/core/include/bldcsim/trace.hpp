#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "bldcsim/sim_config.hpp"

namespace bldcsim {

/// One logged sample of every signal in the trace. Binary columns hold
/// strictly 0/1; emf_norm holds the ternary commutation reference.
struct TraceRecord {
    double t = 0.0;
    double load_torque = 0.0;
    double speed_ref_rpm = 0.0;
    double speed_actual_rpm = 0.0;
    double speed_rad = 0.0;
    double te = 0.0;
    std::array<double, 3> currents{};    // ia ib ic
    std::array<double, 3> emf_volts{};   // ea eb ec
    std::array<double, 3> emf_norm{};    // emf_norm_a .. c
    std::array<int, 3> hall{};           // hall_a .. c
    std::array<int, 6> pwm{};            // pwm_a .. f = legs AH, AL, BH, BL, CH, CL
    double duty = 0.0;
};

/// Averages integrated at the ode rate over the final stretch of the run.
/// Sampled trace rows alias the sector and carrier ripple, so steady-state
/// quantities come from here. window_s = 0 for imported traces.
struct TailAverages {
    double window_s = 0.0;
    double te = 0.0;
    double speed_rad = 0.0;
    double load_torque = 0.0;
};

struct Trace {
    std::vector<TraceRecord> records;
    SimConfig config;  // snapshot; defaulted for imported traces
    TailAverages tail;
};

inline constexpr int kTraceColumnCount = 25;

/// Column order of the trace CSV, fixed.
const std::array<std::string_view, kTraceColumnCount>& trace_columns();

/// Extracts one column by name; throws MissingColumn.
std::vector<double> trace_column(const Trace& trace, std::string_view name);

double record_field(const TraceRecord& r, int column);

}  // namespace bldcsim
