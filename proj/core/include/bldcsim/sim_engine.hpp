#pragma once

#include <string>

#include "bldcsim/trace.hpp"

namespace bldcsim {

/// Fixed-step closed-loop run: classical RK4 on the motor ODEs with the
/// drive voltages held piecewise-constant over each ode_step, the PI
/// controller sampled every control_step and the trace logged every
/// log_step (first row at t = 0, last at t_end). Bit-for-bit deterministic
/// for a given config. Throws ConfigInvalid on step-ratio violations and
/// NumericalDivergence when any state magnitude exceeds 1e6.
Trace run_simulation(const SimConfig& cfg);

struct RunSummary {
    double settle_time_s = 0.0;       // first time the 1% band holds to the end; NaN if never
    double steady_state_error = 0.0;  // mean |ref - actual| / ref_final over the last 5 s
    double final_te = 0.0;            // mean electromagnetic torque over the last 5 s
    double final_load_torque = 0.0;
    double final_speed_rpm = 0.0;
};

RunSummary summarize(const Trace& trace);
std::string summary_text(const RunSummary& summary);

}  // namespace bldcsim
