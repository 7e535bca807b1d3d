#include "bldcsim/sim_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace bldcsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view text, int line_no) {
    const std::string buf(trim(text));
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(buf, &used);
    } catch (const std::exception&) {
        throw ConfigInvalid("config line " + std::to_string(line_no) + ": not a number: '" + buf + "'");
    }
    if (used != buf.size()) {
        throw ConfigInvalid("config line " + std::to_string(line_no) + ": trailing junk after number: '" + buf + "'");
    }
    return value;
}

// Profile syntax: comma-separated `time:value` pairs, e.g. `0:0, 20:3000`.
PiecewiseProfile parse_profile(std::string_view text, int line_no) {
    PiecewiseProfile profile;
    std::string buf(text);
    std::stringstream ss(buf);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string_view pair = trim(item);
        if (pair.empty()) {
            continue;
        }
        const auto colon = pair.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigInvalid("config line " + std::to_string(line_no) +
                                ": profile point must be time:value, got '" + std::string(pair) + "'");
        }
        profile.points.push_back({parse_number(pair.substr(0, colon), line_no),
                                  parse_number(pair.substr(colon + 1), line_no)});
    }
    if (profile.points.empty()) {
        throw ConfigInvalid("config line " + std::to_string(line_no) + ": empty profile");
    }
    return profile;
}

bool is_integer_multiple(double larger, double smaller) {
    if (!(smaller > 0.0) || !(larger > 0.0)) {
        return false;
    }
    const double ratio = larger / smaller;
    const double rounded = std::round(ratio);
    return rounded >= 1.0 && std::fabs(ratio - rounded) <= 1e-9 * ratio;
}

}  // namespace

double rpm_to_rad(double rpm) {
    return rpm * std::numbers::pi / 30.0;
}

double rad_to_rpm(double rad_per_s) {
    return rad_per_s * 30.0 / std::numbers::pi;
}

SimConfig default_config() {
    SimConfig cfg;
    cfg.reference.points = {{0.0, 0.0}, {20.0, rpm_to_rad(3000.0)}};
    cfg.load.points = {{0.0, 0.0}, {50.0, 12.0}};
    return cfg;
}

void validate(const SimConfig& cfg) {
    if (!(cfg.t_end > 0.0)) {
        throw ConfigInvalid("sim.t_end must be > 0");
    }
    if (!(cfg.ode_step > 0.0)) {
        throw ConfigInvalid("sim.ode_step must be > 0");
    }
    if (!is_integer_multiple(cfg.control_step, cfg.ode_step)) {
        throw ConfigInvalid("sim.control_step must be an integer multiple of sim.ode_step");
    }
    if (!is_integer_multiple(cfg.log_step, cfg.control_step)) {
        throw ConfigInvalid("sim.log_step must be an integer multiple of sim.control_step");
    }
    if (!(cfg.pwm.carrier_hz > 0.0)) {
        throw ConfigInvalid("pwm.carrier_hz must be > 0");
    }
    if (!is_integer_multiple(1.0 / cfg.pwm.carrier_hz, cfg.ode_step)) {
        throw ConfigInvalid("PWM carrier period must be an integer multiple of sim.ode_step");
    }
    validate(cfg.motor);
    validate(cfg.gains);
    validate(cfg.reference);
    validate(cfg.load);
}

SimConfig parse_config(std::string_view text) {
    SimConfig cfg = default_config();
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigInvalid("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "sim.t_end") {
            cfg.t_end = parse_number(value, line_no);
        } else if (key == "sim.ode_step") {
            cfg.ode_step = parse_number(value, line_no);
        } else if (key == "sim.control_step") {
            cfg.control_step = parse_number(value, line_no);
        } else if (key == "sim.log_step") {
            cfg.log_step = parse_number(value, line_no);
        } else if (key == "sim.seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_number(value, line_no));
        } else if (key == "motor.resistance") {
            cfg.motor.phase_resistance = parse_number(value, line_no);
        } else if (key == "motor.inductance") {
            cfg.motor.phase_inductance = parse_number(value, line_no);
        } else if (key == "motor.back_emf_constant") {
            cfg.motor.back_emf_constant = parse_number(value, line_no);
            cfg.motor.torque_constant = cfg.motor.back_emf_constant;
        } else if (key == "motor.inertia") {
            cfg.motor.inertia = parse_number(value, line_no);
        } else if (key == "motor.viscous_friction") {
            cfg.motor.viscous_friction = parse_number(value, line_no);
        } else if (key == "motor.pole_pairs") {
            cfg.motor.pole_pairs = static_cast<int>(parse_number(value, line_no));
        } else if (key == "motor.rated_torque") {
            cfg.motor.rated_torque = parse_number(value, line_no);
        } else if (key == "motor.peak_torque") {
            cfg.motor.peak_torque = parse_number(value, line_no);
        } else if (key == "motor.dc_link_voltage") {
            cfg.motor.dc_link_voltage = parse_number(value, line_no);
        } else if (key == "pi.kp") {
            cfg.gains.kp = parse_number(value, line_no);
        } else if (key == "pi.ki") {
            cfg.gains.ki = parse_number(value, line_no);
            if (cfg.gains.ki > 0.0) {
                cfg.gains.integral_limit = 1.0 / cfg.gains.ki;
            }
        } else if (key == "pi.integral_limit") {
            cfg.gains.integral_limit = parse_number(value, line_no);
        } else if (key == "pwm.carrier_hz") {
            cfg.pwm.carrier_hz = parse_number(value, line_no);
        } else if (key == "pwm.shape") {
            if (value == "sawtooth") {
                cfg.pwm.shape = CarrierShape::sawtooth;
            } else if (value == "triangle") {
                cfg.pwm.shape = CarrierShape::triangle;
            } else {
                throw ConfigInvalid("config line " + std::to_string(line_no) +
                                    ": pwm.shape must be sawtooth or triangle");
            }
        } else if (key == "reference.points") {
            cfg.reference = parse_profile(value, line_no);
            for (auto& p : cfg.reference.points) {
                p.value = rpm_to_rad(p.value);
            }
        } else if (key == "load.points") {
            cfg.load = parse_profile(value, line_no);
        } else {
            throw ConfigInvalid("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("config not found: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_key_reference() {
    return "sim.t_end = 75            total simulated time, s\n"
           "sim.ode_step = 2e-5       integrator step, s\n"
           "sim.control_step = 2e-4   PI update period, s (multiple of ode_step)\n"
           "sim.log_step = 0.01       trace sample period, s (multiple of control_step)\n"
           "sim.seed = 1              seed recorded with the run\n"
           "motor.resistance = 0.5          phase resistance, ohm\n"
           "motor.inductance = 0.001        phase inductance, H\n"
           "motor.back_emf_constant = 0.2   Ke = Kt, V*s/rad\n"
           "motor.inertia = 0.002           rotor inertia, kg*m^2\n"
           "motor.viscous_friction = 0.001  N*m*s/rad\n"
           "motor.pole_pairs = 4\n"
           "motor.rated_torque = 12         N*m\n"
           "motor.peak_torque = 18          N*m\n"
           "motor.dc_link_voltage = 160     V\n"
           "pi.kp = 0.01              duty per rad/s\n"
           "pi.ki = 0.05              duty per rad (sets integral_limit = 1/ki)\n"
           "pi.integral_limit = 20    integral clamp\n"
           "pwm.carrier_hz = 5000\n"
           "pwm.shape = sawtooth      sawtooth | triangle\n"
           "reference.points = 0:0, 20:3000   speed schedule, time:rpm pairs\n"
           "load.points = 0:0, 50:12          load schedule, time:N*m pairs\n";
}

}  // namespace bldcsim
