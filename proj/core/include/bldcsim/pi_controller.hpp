#pragma once

#include "bldcsim/errors.hpp"

namespace bldcsim {

struct PiGains {
    double kp = 0.01;             // duty per rad/s
    double ki = 0.05;             // duty per rad
    double integral_limit = 20.0; // clamp on |integral|, (rad/s)*s; 1/ki by default
};

void validate(const PiGains& gains);

struct PiState {
    double integral = 0.0;
    bool last_output_saturated = false;
};

struct PiOutput {
    double duty = 0.0;   // clamped command in [0, 1]
    PiState state;
    double u_raw = 0.0;  // pre-saturation value
};

/// One discrete PI update: e = reference - actual, integral accumulates
/// e * dt under a conditional-integration anti-windup (frozen while the
/// output is pinned at a rail and e pushes it further out) plus a hard
/// clamp at +-integral_limit.
PiOutput pi_step(double reference, double actual, double dt, const PiGains& gains, PiState state);

/// Clamp of the raw controller output onto the duty range [0, 1].
double duty_to_command(double u_raw);

}  // namespace bldcsim
