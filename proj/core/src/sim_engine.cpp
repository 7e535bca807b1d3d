#include "bldcsim/sim_engine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "bldcsim/drive.hpp"

namespace bldcsim {

namespace {

using State5 = std::array<double, 5>;  // ia ib ic theta_e omega_m

State5 pack(const MotorState& s) {
    return {s.phase_currents[0], s.phase_currents[1], s.phase_currents[2],
            s.electrical_angle, s.mechanical_speed};
}

MotorState unpack(const State5& y) {
    MotorState s;
    s.phase_currents = {y[0], y[1], y[2]};
    s.electrical_angle = y[3];
    s.mechanical_speed = y[4];
    return s;
}

State5 eval_derivative(const State5& y, double t, const PhaseVoltages& pv, const SimConfig& cfg) {
    const StateDerivative d = derivatives(unpack(y), pv, profile_eval(cfg.load, t), cfg.motor);
    return {d.d_currents[0], d.d_currents[1], d.d_currents[2], d.d_angle, d.d_speed};
}

State5 rk4_step(const State5& y, double t, double dt, const PhaseVoltages& pv, const SimConfig& cfg) {
    const State5 k1 = eval_derivative(y, t, pv, cfg);
    State5 tmp;
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const State5 k2 = eval_derivative(tmp, t + 0.5 * dt, pv, cfg);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const State5 k3 = eval_derivative(tmp, t + 0.5 * dt, pv, cfg);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + dt * k3[i];
    const State5 k4 = eval_derivative(tmp, t + dt, pv, cfg);
    State5 out;
    for (int i = 0; i < 5; ++i) {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

// Commutation swaps one leg of the conducting pair. The opened phase loses
// its current, the phase that stays keeps it, and the incoming phase closes
// the loop so the currents still sum to zero.
void remap_on_commutation(MotorState& s,
                          const std::array<bool, 3>& before,
                          const std::array<bool, 3>& after) {
    int entering = -1;
    int staying = -1;
    int entering_count = 0;
    int after_count = 0;
    for (int i = 0; i < 3; ++i) {
        if (!after[i]) {
            s.phase_currents[i] = 0.0;
        } else {
            ++after_count;
            if (before[i]) {
                staying = i;
            } else {
                entering = i;
                ++entering_count;
            }
        }
    }
    if (after_count == 2 && entering_count == 1 && staying >= 0) {
        s.phase_currents[entering] = -s.phase_currents[staying];
    } else if (entering_count > 0) {
        for (int i = 0; i < 3; ++i) {
            s.phase_currents[i] = 0.0;
        }
    }
}

TraceRecord make_record(double t, const MotorState& s, double duty, const HallState& hall,
                        const GateSignals& gates, bool pwm_on, const SimConfig& cfg) {
    TraceRecord r;
    r.t = t;
    r.load_torque = profile_eval(cfg.load, t);
    const double ref = profile_eval(cfg.reference, t);
    r.speed_ref_rpm = rad_to_rpm(ref);
    r.speed_actual_rpm = rad_to_rpm(s.mechanical_speed);
    r.speed_rad = s.mechanical_speed;
    r.te = electromagnetic_torque(s, cfg.motor);
    r.currents = s.phase_currents;
    r.emf_volts = phase_back_emfs(s, cfg.motor);
    r.emf_norm = hall_emf_levels(hall);
    r.hall = {hall.a ? 1 : 0, hall.b ? 1 : 0, hall.c ? 1 : 0};
    r.pwm = {
        gates.on[kGateAHigh] && pwm_on ? 1 : 0,
        gates.on[kGateALow] ? 1 : 0,
        gates.on[kGateBHigh] && pwm_on ? 1 : 0,
        gates.on[kGateBLow] ? 1 : 0,
        gates.on[kGateCHigh] && pwm_on ? 1 : 0,
        gates.on[kGateCLow] ? 1 : 0,
    };
    r.duty = duty;
    return r;
}

}  // namespace

Trace run_simulation(const SimConfig& cfg) {
    validate(cfg);
    const double dt = cfg.ode_step;
    const long long n_steps = std::llround(cfg.t_end / dt);
    const long long control_every = std::llround(cfg.control_step / dt);
    const long long log_every = std::llround(cfg.log_step / dt);

    const long long carrier_steps = std::llround(1.0 / (cfg.pwm.carrier_hz * dt));
    const long long tail_start = n_steps - std::min(n_steps, std::llround(std::min(5.0, cfg.t_end) / dt));

    MotorState state;
    PiState pi;
    double duty = 0.0;
    std::array<bool, 3> prev_driven{};
    bool have_mask = false;
    double tail_te = 0.0;
    double tail_speed = 0.0;
    double tail_load = 0.0;
    long long tail_count = 0;

    Trace trace;
    trace.config = cfg;
    trace.records.reserve(static_cast<std::size_t>(n_steps / log_every) + 1);

    for (long long step = 0; step <= n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;

        if (step % control_every == 0) {
            const PiOutput out = pi_step(profile_eval(cfg.reference, t), state.mechanical_speed,
                                         cfg.control_step, cfg.gains, pi);
            duty = out.duty;
            pi = out.state;
        }

        const HallState hall = hall_from_angle(state.electrical_angle);
        const GateSignals gates = commutation_table(hall);
        // Carrier phase from whole steps; the period is a multiple of dt.
        const double carrier_phase = static_cast<double>(step % carrier_steps) /
                                     static_cast<double>(carrier_steps);
        const bool pwm_on = pwm_compare(duty, carrier_phase, cfg.pwm);
        const PhaseVoltages pv = apply_gates(gates, pwm_on, cfg.motor.dc_link_voltage);

        if (have_mask && pv.driven != prev_driven) {
            remap_on_commutation(state, prev_driven, pv.driven);
        }
        prev_driven = pv.driven;
        have_mask = true;

        if (step % log_every == 0) {
            trace.records.push_back(make_record(t, state, duty, hall, gates, pwm_on, cfg));
        }
        if (step >= tail_start) {
            tail_te += electromagnetic_torque(state, cfg.motor);
            tail_speed += state.mechanical_speed;
            tail_load += profile_eval(cfg.load, t);
            ++tail_count;
        }
        if (step == n_steps) {
            break;
        }

        State5 y = rk4_step(pack(state), t, dt, pv, cfg);
        y[3] = wrap_angle(y[3]);
        state = unpack(y);
        for (int i = 0; i < 3; ++i) {
            if (!pv.driven[i]) {
                state.phase_currents[i] = 0.0;
            }
        }

        for (double v : y) {
            if (!(std::fabs(v) <= 1e6)) {
                char buf[96];
                std::snprintf(buf, sizeof(buf),
                              "state magnitude exceeded 1e6 at t = %.6g s (unstable parameter set)", t);
                throw NumericalDivergence(buf);
            }
        }
    }
    if (tail_count > 0) {
        trace.tail.window_s = static_cast<double>(n_steps - tail_start) * dt;
        trace.tail.te = tail_te / static_cast<double>(tail_count);
        trace.tail.speed_rad = tail_speed / static_cast<double>(tail_count);
        trace.tail.load_torque = tail_load / static_cast<double>(tail_count);
    }
    return trace;
}

RunSummary summarize(const Trace& trace) {
    RunSummary s;
    s.settle_time_s = std::numeric_limits<double>::quiet_NaN();
    if (trace.records.empty()) {
        return s;
    }
    const auto& records = trace.records;
    const double t_end = records.back().t;
    const double ref_final = records.back().speed_ref_rpm;
    s.final_load_torque = records.back().load_torque;
    s.final_speed_rpm = records.back().speed_actual_rpm;

    const double window_start = t_end - std::min(5.0, t_end);
    double err_acc = 0.0;
    double te_acc = 0.0;
    std::size_t n = 0;
    for (const auto& r : records) {
        if (r.t >= window_start) {
            err_acc += std::fabs(r.speed_ref_rpm - r.speed_actual_rpm);
            te_acc += r.te;
            ++n;
        }
    }
    if (n > 0) {
        s.final_te = te_acc / static_cast<double>(n);
        s.steady_state_error = ref_final > 0.0 ? err_acc / static_cast<double>(n) / ref_final : 0.0;
    }
    if (trace.tail.window_s > 0.0) {
        s.final_te = trace.tail.te;  // ode-rate average, free of sampling alias
    }

    if (ref_final > 0.0) {
        const double band = 0.01 * ref_final;
        // Last index where the error leaves the band; settled from the next sample on.
        std::ptrdiff_t last_out = -1;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (std::fabs(records[i].speed_ref_rpm - records[i].speed_actual_rpm) > band) {
                last_out = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (last_out + 1 < static_cast<std::ptrdiff_t>(records.size())) {
            s.settle_time_s = records[static_cast<std::size_t>(last_out + 1)].t;
        }
    } else if (std::fabs(s.final_speed_rpm) < 1e-9) {
        s.settle_time_s = 0.0;
    }
    return s;
}

std::string summary_text(const RunSummary& s) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "settle_time_s = %.6g\n"
                  "steady_state_error = %.6g\n"
                  "final_te = %.6g\n"
                  "final_load_torque = %.6g\n"
                  "final_speed_rpm = %.6g\n",
                  s.settle_time_s, s.steady_state_error, s.final_te, s.final_load_torque,
                  s.final_speed_rpm);
    return buf;
}

}  // namespace bldcsim
