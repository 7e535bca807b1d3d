#pragma once

#include <array>

#include "bldcsim/errors.hpp"

namespace bldcsim {

/// Constants of a three-phase, trapezoidal back-EMF machine. SI units
/// throughout; mutual inductance is folded into a single effective
/// phase_inductance. torque_constant must equal back_emf_constant (same
/// physical quantity in SI).
struct MotorParams {
    double phase_resistance = 0.5;   // ohm
    double phase_inductance = 1e-3;  // H
    double back_emf_constant = 0.2;  // V*s/rad (per-unit trapezoid scales it)
    double torque_constant = 0.2;    // N*m/A
    double inertia = 0.002;          // kg*m^2
    double viscous_friction = 1e-3;  // N*m*s/rad
    int pole_pairs = 4;
    double rated_torque = 12.0;      // N*m
    double peak_torque = 18.0;       // N*m, 150% of rated
    double dc_link_voltage = 160.0;  // V
};

/// Throws ConfigInvalid unless every constant is strictly positive,
/// pole_pairs >= 1, peak >= rated and Kt == Ke.
void validate(const MotorParams& params);

/// Integrated ODE state. phase_currents sum to zero (isolated neutral) and
/// electrical_angle is kept wrapped to [0, 2*pi) by the integrator.
struct MotorState {
    std::array<double, 3> phase_currents{};  // A
    double electrical_angle = 0.0;           // rad
    double mechanical_speed = 0.0;           // rad/s
};

struct StateDerivative {
    std::array<double, 3> d_currents{};  // A/s, sums to zero
    double d_angle = 0.0;                // rad/s (electrical)
    double d_speed = 0.0;                // rad/s^2
};

/// Line-to-neutral drive voltages. A phase whose leg has no closed switch is
/// not driven: it carries no current and the integrator masks its derivative.
struct PhaseVoltages {
    std::array<double, 3> line_to_neutral{};      // V
    std::array<bool, 3> driven{true, true, true};
};

/// Normalized trapezoidal back-EMF waveform: ramp -1 -> +1 on [0, 60deg),
/// +1 on [60, 180), ramp +1 -> -1 on [180, 240), -1 on [240, 360).
/// Total over all finite angles; f(theta + pi) == -f(theta).
double back_emf_shape(double theta_e);

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double theta);

/// Per-phase EMF in volts: e_x = Ke * w_m * shape(theta_e - shift_x) with
/// phase b shifted by 120 deg and phase c by 240 deg.
std::array<double, 3> phase_back_emfs(const MotorState& state, const MotorParams& params);

/// Te = Kt * sum_x shape(theta_e - shift_x) * i_x. Formulated through the
/// shape function so standstill (w_m = 0) is not singular.
double electromagnetic_torque(const MotorState& state, const MotorParams& params);

/// Electrical equation L di/dt = v - R i - e per driven phase with the
/// neutral potential solved so that the driven currents sum to a constant;
/// undriven phases get a zero derivative. Mechanical equation
/// J dw/dt = Te - T_load - B w, and d(theta_e)/dt = P * w_m.
StateDerivative derivatives(const MotorState& state,
                            const PhaseVoltages& voltages,
                            double load_torque,
                            const MotorParams& params);

}  // namespace bldcsim
