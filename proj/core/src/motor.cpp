#include "bldcsim/motor.hpp"

#include <cmath>
#include <numbers>

namespace bldcsim {

namespace {

constexpr double k_two_pi = 2.0 * std::numbers::pi;
constexpr double k_sixty_deg = std::numbers::pi / 3.0;

}  // namespace

void validate(const MotorParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw ConfigInvalid(std::string("motor parameter must be > 0: ") + name);
        }
    };
    positive(p.phase_resistance, "phase_resistance");
    positive(p.phase_inductance, "phase_inductance");
    positive(p.back_emf_constant, "back_emf_constant");
    positive(p.torque_constant, "torque_constant");
    positive(p.inertia, "inertia");
    positive(p.viscous_friction, "viscous_friction");
    positive(p.rated_torque, "rated_torque");
    positive(p.peak_torque, "peak_torque");
    positive(p.dc_link_voltage, "dc_link_voltage");
    if (p.pole_pairs < 1) {
        throw ConfigInvalid("motor parameter pole_pairs must be >= 1");
    }
    if (p.peak_torque < p.rated_torque) {
        throw ConfigInvalid("motor peak_torque must be >= rated_torque");
    }
    const double rel = std::fabs(p.torque_constant - p.back_emf_constant) / p.back_emf_constant;
    if (rel > 1e-9) {
        throw ConfigInvalid("motor torque_constant must equal back_emf_constant in SI units");
    }
}

double wrap_angle(double theta) {
    double w = std::fmod(theta, k_two_pi);
    if (w < 0.0) {
        w += k_two_pi;
    }
    if (w >= k_two_pi) {  // fmod of -tiny can land on 2*pi after the shift
        w = 0.0;
    }
    return w;
}

double back_emf_shape(double theta_e) {
    const double t = wrap_angle(theta_e);
    if (t < k_sixty_deg) {
        return -1.0 + 2.0 * (t / k_sixty_deg);
    }
    if (t < 3.0 * k_sixty_deg) {
        return 1.0;
    }
    if (t < 4.0 * k_sixty_deg) {
        return 1.0 - 2.0 * ((t - 3.0 * k_sixty_deg) / k_sixty_deg);
    }
    return -1.0;
}

std::array<double, 3> phase_back_emfs(const MotorState& s, const MotorParams& p) {
    const double scale = p.back_emf_constant * s.mechanical_speed;
    return {
        scale * back_emf_shape(s.electrical_angle),
        scale * back_emf_shape(s.electrical_angle - 2.0 * k_sixty_deg),
        scale * back_emf_shape(s.electrical_angle - 4.0 * k_sixty_deg),
    };
}

double electromagnetic_torque(const MotorState& s, const MotorParams& p) {
    const double fa = back_emf_shape(s.electrical_angle);
    const double fb = back_emf_shape(s.electrical_angle - 2.0 * k_sixty_deg);
    const double fc = back_emf_shape(s.electrical_angle - 4.0 * k_sixty_deg);
    return p.torque_constant *
           (fa * s.phase_currents[0] + fb * s.phase_currents[1] + fc * s.phase_currents[2]);
}

StateDerivative derivatives(const MotorState& s,
                            const PhaseVoltages& v,
                            double load_torque,
                            const MotorParams& p) {
    const auto emf = phase_back_emfs(s, p);

    StateDerivative d;
    int driven_count = 0;
    double imbalance = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (v.driven[i]) {
            ++driven_count;
            imbalance += v.line_to_neutral[i] - emf[i] - p.phase_resistance * s.phase_currents[i];
        }
    }
    if (driven_count >= 2) {
        // Neutral potential absorbs the zero-sequence part of the applied
        // voltage; no zero-sequence current can flow with an isolated neutral.
        const double v_neutral = imbalance / driven_count;
        for (int i = 0; i < 3; ++i) {
            if (v.driven[i]) {
                d.d_currents[i] = (v.line_to_neutral[i] - emf[i] -
                                   p.phase_resistance * s.phase_currents[i] - v_neutral) /
                                  p.phase_inductance;
            }
        }
    }

    const double te = electromagnetic_torque(s, p);
    d.d_speed = (te - load_torque - p.viscous_friction * s.mechanical_speed) / p.inertia;
    d.d_angle = static_cast<double>(p.pole_pairs) * s.mechanical_speed;
    return d;
}

}  // namespace bldcsim
