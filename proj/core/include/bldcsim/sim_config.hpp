#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "bldcsim/drive.hpp"
#include "bldcsim/motor.hpp"
#include "bldcsim/pi_controller.hpp"
#include "bldcsim/profile.hpp"

namespace bldcsim {

/// Full description of one closed-loop run. ode_step <= control_step <=
/// log_step, each larger step an integer multiple of the smaller, and the
/// PWM carrier period an integer multiple of ode_step.
struct SimConfig {
    double t_end = 75.0;
    double ode_step = 2e-5;
    double control_step = 2e-4;
    double log_step = 1e-2;
    MotorParams motor{};
    PiGains gains{};
    PwmConfig pwm{};
    PiecewiseProfile reference;  // rad/s breakpoints
    PiecewiseProfile load;       // N*m breakpoints
    std::uint64_t seed = 1;
};

/// Defaults: speed reference ramps 0 -> 3000 rpm over 20 s then holds, load
/// ramps 0 -> 12 N*m (rated) over 50 s then holds.
SimConfig default_config();

void validate(const SimConfig& cfg);

/// Parses the flat `key = value` config text. Unknown keys are rejected.
/// Speed profile points are given in rpm and stored in rad/s.
SimConfig parse_config(std::string_view text);

/// Reads and parses a config file; IoFailure when unreadable.
SimConfig load_config(const std::filesystem::path& path);

/// The accepted keys with their defaults, one per line (CLI help text).
std::string config_key_reference();

double rpm_to_rad(double rpm);
double rad_to_rpm(double rad_per_s);

}  // namespace bldcsim
