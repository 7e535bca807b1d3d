#include "bldcsim/pi_controller.hpp"

#include <algorithm>

namespace bldcsim {

void validate(const PiGains& g) {
    if (g.kp < 0.0 || g.ki < 0.0) {
        throw ConfigInvalid("pi gains must be >= 0");
    }
    if (!(g.integral_limit > 0.0)) {
        throw ConfigInvalid("pi integral_limit must be > 0");
    }
}

double duty_to_command(double u_raw) {
    return std::clamp(u_raw, 0.0, 1.0);
}

PiOutput pi_step(double reference, double actual, double dt, const PiGains& g, PiState st) {
    if (!(dt > 0.0)) {
        throw ConfigInvalid("pi_step requires dt > 0");
    }
    const double e = reference - actual;

    double integral = std::clamp(st.integral + e * dt, -g.integral_limit, g.integral_limit);
    double u = g.kp * e + g.ki * integral;
    if ((u > 1.0 && e > 0.0) || (u < 0.0 && e < 0.0)) {
        // Saturated and the error drives it further out: freeze the integral.
        integral = st.integral;
        u = g.kp * e + g.ki * integral;
    }

    const double duty = duty_to_command(u);
    return {duty, PiState{integral, u != duty}, u};
}

}  // namespace bldcsim
