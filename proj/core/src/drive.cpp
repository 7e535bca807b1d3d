#include "bldcsim/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bldcsim {

namespace {

constexpr double k_sixty_deg = std::numbers::pi / 3.0;

// Sector -> hall code, sector 0 anchored at theta_e = 0.
constexpr std::array<std::array<bool, 3>, 6> k_hall_codes{{
    {true, false, false},
    {true, true, false},
    {false, true, false},
    {false, true, true},
    {false, false, true},
    {true, false, true},
}};

// Sector -> (high-side switch, low-side switch). The pair is chosen so the
// trapezoid of back_emf_shape yields positive torque throughout the sector.
constexpr std::array<std::array<int, 2>, 6> k_pairs{{
    {kGateAHigh, kGateBLow},
    {kGateAHigh, kGateCLow},
    {kGateBHigh, kGateCLow},
    {kGateBHigh, kGateALow},
    {kGateCHigh, kGateALow},
    {kGateCHigh, kGateBLow},
}};

// Sector -> ideal per-phase EMF level: the phase crossing zero ramps, the
// other two sit on the +-1 flats.
constexpr std::array<std::array<double, 3>, 6> k_emf_levels{{
    {0.0, -1.0, 1.0},
    {1.0, -1.0, 0.0},
    {1.0, 0.0, -1.0},
    {0.0, 1.0, -1.0},
    {-1.0, 1.0, 0.0},
    {-1.0, 0.0, 1.0},
}};

}  // namespace

HallState hall_from_angle(double theta_e) {
    const double t = wrap_angle(theta_e);
    int sector = static_cast<int>(t / k_sixty_deg);
    sector = std::clamp(sector, 0, 5);
    const auto& code = k_hall_codes[static_cast<std::size_t>(sector)];
    return {code[0], code[1], code[2]};
}

int hall_sector(const HallState& hall) {
    for (int s = 0; s < 6; ++s) {
        const auto& code = k_hall_codes[static_cast<std::size_t>(s)];
        if (code[0] == hall.a && code[1] == hall.b && code[2] == hall.c) {
            return s;
        }
    }
    throw InvalidHallCode("hall code is not one of the six valid sector codes");
}

GateSignals commutation_table(const HallState& hall) {
    const int sector = hall_sector(hall);
    GateSignals g;
    g.on[static_cast<std::size_t>(k_pairs[static_cast<std::size_t>(sector)][0])] = true;
    g.on[static_cast<std::size_t>(k_pairs[static_cast<std::size_t>(sector)][1])] = true;
    return g;
}

std::array<double, 3> hall_emf_levels(const HallState& hall) {
    return k_emf_levels[static_cast<std::size_t>(hall_sector(hall))];
}

bool pwm_compare(double duty, double carrier_phase, const PwmConfig& cfg) {
    const double d = std::clamp(duty, 0.0, 1.0);
    if (d >= 1.0) {
        return true;
    }
    double carrier = carrier_phase;
    if (cfg.shape == CarrierShape::triangle) {
        carrier = carrier_phase < 0.5 ? 2.0 * carrier_phase : 2.0 * (1.0 - carrier_phase);
    }
    return carrier < d;
}

bool pwm_generate(double duty, double time_s, const PwmConfig& cfg) {
    const double cycles = time_s * cfg.carrier_hz;
    return pwm_compare(duty, cycles - std::floor(cycles), cfg);
}

PhaseVoltages apply_gates(const GateSignals& gates, bool pwm_on, double vdc) {
    PhaseVoltages out;
    for (int leg = 0; leg < 3; ++leg) {
        const bool high = gates.on[static_cast<std::size_t>(2 * leg)];
        const bool low = gates.on[static_cast<std::size_t>(2 * leg + 1)];
        if (high && low) {
            throw ShootThrough("both switches of one inverter leg commanded on");
        }
        out.driven[static_cast<std::size_t>(leg)] = high || low;
        if (!pwm_on) {
            continue;  // freewheel: conducting pair shorted, 0 V line-to-neutral
        }
        if (high) {
            out.line_to_neutral[static_cast<std::size_t>(leg)] = 0.5 * vdc;
        } else if (low) {
            out.line_to_neutral[static_cast<std::size_t>(leg)] = -0.5 * vdc;
        }
    }
    return out;
}

}  // namespace bldcsim
