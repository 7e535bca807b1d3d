#pragma once

#include <array>

#include "bldcsim/motor.hpp"

namespace bldcsim {

/// Hall sensor code. Exactly six codes are valid; (0,0,0) and (1,1,1)
/// indicate a sensor fault.
struct HallState {
    bool a = false;
    bool b = false;
    bool c = false;

    friend bool operator==(const HallState&, const HallState&) = default;
};

/// Switch order of the three half-bridges.
enum GateIndex {
    kGateAHigh = 0,
    kGateALow = 1,
    kGateBHigh = 2,
    kGateBLow = 3,
    kGateCHigh = 4,
    kGateCLow = 5,
};

struct GateSignals {
    std::array<bool, 6> on{};

    friend bool operator==(const GateSignals&, const GateSignals&) = default;
};

enum class CarrierShape { sawtooth, triangle };

struct PwmConfig {
    double carrier_hz = 5000.0;
    CarrierShape shape = CarrierShape::sawtooth;
};

/// Sector code of the 60 deg sector containing theta_e. Sector 0 = [0, 60deg)
/// maps to (1,0,0) and the codes advance in the one-bit-flip order
/// (1,0,0) (1,1,0) (0,1,0) (0,1,1) (0,0,1) (1,0,1).
HallState hall_from_angle(double theta_e);

/// Sector index 0..5 for a valid code; throws InvalidHallCode otherwise.
int hall_sector(const HallState& hall);

/// Six-step table: one high-side and one low-side switch on distinct legs,
/// anchored at (1,0,0) -> A-high + B-low. Throws InvalidHallCode on the two
/// fault codes.
GateSignals commutation_table(const HallState& hall);

/// Ternary commutation reference decoded from the hall code: the ideal EMF
/// level of each phase in the current sector, one of {-1, 0, +1}.
std::array<double, 3> hall_emf_levels(const HallState& hall);

/// Carrier comparison at an exact phase in [0, 1): 1 while carrier < duty.
/// Duty is clamped to [0, 1]; duty = 1 is always on, duty = 0 always off.
bool pwm_compare(double duty, double carrier_phase, const PwmConfig& cfg);

/// pwm_compare at phase frac(time * carrier_hz). Timer-driven callers that
/// know the carrier period in whole steps should compute the phase
/// themselves; deriving it from a float time can land a sample on the wrong
/// side of a carrier edge.
bool pwm_generate(double duty, double time_s, const PwmConfig& cfg);

/// Inverter output with hard chopping on the high side: while the PWM bit is
/// on the conducting pair sees +-vdc/2 line-to-neutral, while it is off the
/// pair freewheels at 0 V. Legs with no closed switch float (not driven).
/// Throws ShootThrough if both switches of one leg are commanded on.
PhaseVoltages apply_gates(const GateSignals& gates, bool pwm_on, double vdc);

}  // namespace bldcsim
