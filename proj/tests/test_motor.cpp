#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "bldcsim/motor.hpp"

using namespace bldcsim;

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double d) {
    return d * kPi / 180.0;
}

// Independent oracle: same trapezoid evaluated by breakpoint interpolation in
// degrees, kept separate from the implementation's branch logic.
double shape_oracle(double theta_rad) {
    double d = std::fmod(theta_rad * 180.0 / kPi, 360.0);
    if (d < 0.0) {
        d += 360.0;
    }
    const double xs[] = {0.0, 60.0, 180.0, 240.0, 360.0};
    const double ys[] = {-1.0, 1.0, 1.0, -1.0, -1.0};
    for (int i = 0; i < 4; ++i) {
        if (d <= xs[i + 1]) {
            return std::lerp(ys[i], ys[i + 1], (d - xs[i]) / (xs[i + 1] - xs[i]));
        }
    }
    return -1.0;
}

MotorParams test_params() {
    MotorParams p;
    p.back_emf_constant = 0.1;
    p.torque_constant = 0.1;
    return p;
}

}  // namespace

TEST_CASE("back_emf_shape anchor values") {
    CHECK(back_emf_shape(deg(120.0)) == doctest::Approx(1.0));
    CHECK(back_emf_shape(deg(30.0)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(back_emf_shape(deg(300.0)) == doctest::Approx(-1.0));
}

TEST_CASE("back_emf_shape half-wave antisymmetry") {
    for (double theta : {0.1, 1.0, 2.5}) {
        CHECK(back_emf_shape(theta + kPi) == doctest::Approx(-back_emf_shape(theta)).epsilon(1e-12));
    }
}

TEST_CASE("back_emf_shape periodicity over random angles") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double theta = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 40.0;
        CHECK(back_emf_shape(theta + 2.0 * kPi) ==
              doctest::Approx(back_emf_shape(theta)).epsilon(1e-10));
    }
}

TEST_CASE("back_emf_shape range and 120-degree flat tops") {
    // Midpoint probing at 1 degree resolution avoids the segment boundaries.
    int at_plus_one = 0;
    int at_minus_one = 0;
    for (int k = 0; k < 360; ++k) {
        const double v = back_emf_shape(deg(k + 0.5));
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
        if (v == 1.0) {
            ++at_plus_one;
        }
        if (v == -1.0) {
            ++at_minus_one;
        }
    }
    CHECK(at_plus_one == 120);
    CHECK(at_minus_one == 120);
}

TEST_CASE("back_emf_shape matches the breakpoint oracle everywhere") {
    for (int k = 0; k < 3600; ++k) {
        const double theta = deg(k * 0.1);
        CHECK(back_emf_shape(theta) == doctest::Approx(shape_oracle(theta)).epsilon(1e-9));
    }
}

TEST_CASE("phase_back_emfs zero speed and flat-top value") {
    MotorState s;
    const MotorParams p = test_params();
    s.mechanical_speed = 0.0;
    s.electrical_angle = 1.0;
    for (double e : phase_back_emfs(s, p)) {
        CHECK(e == 0.0);
    }

    s.mechanical_speed = 100.0;
    s.electrical_angle = deg(120.0);
    CHECK(phase_back_emfs(s, p)[0] == doctest::Approx(10.0));
}

TEST_CASE("phase_back_emfs sum follows the piecewise oracle") {
    const MotorParams p = test_params();
    MotorState s;
    s.mechanical_speed = 57.0;
    for (double theta_deg : {90.0, 10.0, 217.0}) {
        s.electrical_angle = deg(theta_deg);
        const auto e = phase_back_emfs(s, p);
        const double expected = p.back_emf_constant * s.mechanical_speed *
                                (shape_oracle(s.electrical_angle) +
                                 shape_oracle(s.electrical_angle - deg(120.0)) +
                                 shape_oracle(s.electrical_angle - deg(240.0)));
        CHECK(e[0] + e[1] + e[2] == doctest::Approx(expected).epsilon(1e-9));
    }
    // At 90 deg the three segments cancel exactly.
    s.electrical_angle = deg(90.0);
    const auto e = phase_back_emfs(s, p);
    CHECK(e[0] + e[1] + e[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("electromagnetic_torque anchors") {
    const MotorParams p = test_params();
    MotorState s;
    CHECK(electromagnetic_torque(s, p) == 0.0);

    // f_a = +1 and f_b = -1 together on [60, 120) deg.
    s.electrical_angle = deg(90.0);
    s.phase_currents = {5.0, -5.0, 0.0};
    CHECK(electromagnetic_torque(s, p) == doctest::Approx(1.0));
}

TEST_CASE("electromagnetic_torque is linear in the currents") {
    const MotorParams p = test_params();
    std::mt19937_64 rng(5);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int i = 0; i < 50; ++i) {
        MotorState s;
        s.electrical_angle = u() * 10.0;
        const double ia = u() * 20.0;
        const double ib = u() * 20.0;
        s.phase_currents = {ia, ib, -(ia + ib)};
        const double alpha = u() * 3.0;
        const double te = electromagnetic_torque(s, p);
        MotorState scaled = s;
        for (double& c : scaled.phase_currents) {
            c *= alpha;
        }
        CHECK(electromagnetic_torque(scaled, p) == doctest::Approx(alpha * te).epsilon(1e-12));
    }
}

TEST_CASE("power balance: sum e*i equals Te*w") {
    const MotorParams p = test_params();
    std::mt19937_64 rng(17);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int i = 0; i < 20; ++i) {
        MotorState s;
        s.electrical_angle = u() * 7.0;
        s.mechanical_speed = u() * 400.0 + 450.0;  // keep away from zero
        const double ia = u() * 30.0;
        const double ib = u() * 30.0;
        s.phase_currents = {ia, ib, -(ia + ib)};
        const auto e = phase_back_emfs(s, p);
        const double electrical = e[0] * s.phase_currents[0] + e[1] * s.phase_currents[1] +
                                  e[2] * s.phase_currents[2];
        const double mechanical = electromagnetic_torque(s, p) * s.mechanical_speed;
        CHECK(electrical == doctest::Approx(mechanical).epsilon(1e-9));
        // Same identity read as the torque cross-check Te = sum(e*i)/w.
        CHECK(electromagnetic_torque(s, p) ==
              doctest::Approx(electrical / s.mechanical_speed).epsilon(1e-9));
    }
}

TEST_CASE("derivatives equilibrium is a fixed point") {
    const MotorParams p = test_params();
    MotorState s;
    s.electrical_angle = deg(95.0);
    s.mechanical_speed = 120.0;
    s.phase_currents = {8.0, -3.0, -5.0};
    const auto e = phase_back_emfs(s, p);
    PhaseVoltages v;
    for (int i = 0; i < 3; ++i) {
        v.line_to_neutral[i] = p.phase_resistance * s.phase_currents[i] + e[i];
    }
    const double load = electromagnetic_torque(s, p) - p.viscous_friction * s.mechanical_speed;
    const StateDerivative d = derivatives(s, v, load, p);
    for (double di : d.d_currents) {
        CHECK(di == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK(d.d_speed == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d.d_angle == doctest::Approx(p.pole_pairs * s.mechanical_speed));
}

TEST_CASE("derivatives of the all-zero state vanish") {
    const MotorParams p = test_params();
    const StateDerivative d = derivatives(MotorState{}, PhaseVoltages{}, 0.0, p);
    for (double di : d.d_currents) {
        CHECK(di == 0.0);
    }
    CHECK(d.d_angle == 0.0);
    CHECK(d.d_speed == 0.0);
}

TEST_CASE("derivatives keep the current sum constant") {
    const MotorParams p = test_params();
    std::mt19937_64 rng(23);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int i = 0; i < 100; ++i) {
        MotorState s;
        s.electrical_angle = u() * 9.0;
        s.mechanical_speed = u() * 300.0;
        const double ia = u() * 25.0;
        const double ib = u() * 25.0;
        s.phase_currents = {ia, ib, -(ia + ib)};
        PhaseVoltages v;
        v.line_to_neutral = {u() * 80.0, u() * 80.0, u() * 80.0};
        const StateDerivative d = derivatives(s, v, u() * 10.0, p);
        const double sum = d.d_currents[0] + d.d_currents[1] + d.d_currents[2];
        double scale = 0.0;
        for (double di : d.d_currents) {
            scale = std::max(scale, std::fabs(di));
        }
        CHECK(std::fabs(sum) <= 1e-9 * std::max(scale, 1.0));
    }
}

TEST_CASE("derivatives mask undriven phases") {
    const MotorParams p = test_params();
    MotorState s;
    s.phase_currents = {4.0, -4.0, 0.0};
    s.mechanical_speed = 50.0;
    s.electrical_angle = deg(100.0);
    PhaseVoltages v;
    v.line_to_neutral = {50.0, -50.0, 0.0};
    v.driven = {true, true, false};
    const StateDerivative d = derivatives(s, v, 0.0, p);
    CHECK(d.d_currents[2] == 0.0);
    CHECK(d.d_currents[0] == doctest::Approx(-d.d_currents[1]).epsilon(1e-12));
}

TEST_CASE("single-phase step response has time constant L/R") {
    // RL step via the conducting pair with the EMF suppressed by a huge
    // inertia holding the rotor still; the analytic tau = L/R is the oracle.
    MotorParams p = test_params();
    p.inertia = 1e9;
    MotorState s;
    s.electrical_angle = deg(90.0);
    PhaseVoltages v;
    v.line_to_neutral = {50.0, -50.0, 0.0};
    v.driven = {true, true, false};

    const double dt = 1e-6;
    const double i_inf = 50.0 / p.phase_resistance;
    std::vector<double> samples;  // i_a at 0.2 ms spacing
    for (int step = 0; step < 4000; ++step) {
        // RK4 on the two conducting phases only.
        auto f = [&](const MotorState& st) { return derivatives(st, v, 0.0, p); };
        auto advance = [&](const MotorState& st, const StateDerivative& d, double h) {
            MotorState out = st;
            for (int i = 0; i < 3; ++i) {
                out.phase_currents[i] += h * d.d_currents[i];
            }
            out.mechanical_speed += h * d.d_speed;
            out.electrical_angle += h * d.d_angle;
            return out;
        };
        const auto k1 = f(s);
        const auto k2 = f(advance(s, k1, dt / 2));
        const auto k3 = f(advance(s, k2, dt / 2));
        const auto k4 = f(advance(s, k3, dt));
        MotorState next = s;
        for (int i = 0; i < 3; ++i) {
            next.phase_currents[i] += dt / 6.0 *
                (k1.d_currents[i] + 2 * k2.d_currents[i] + 2 * k3.d_currents[i] + k4.d_currents[i]);
        }
        s = next;
        if ((step + 1) % 200 == 0) {
            samples.push_back(s.phase_currents[0]);
        }
    }
    // Fit log(i_inf - i) = log(i_inf) - t / tau by least squares.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double t = 2e-4 * static_cast<double>(k + 1);
        const double residual = i_inf - samples[k];
        if (residual <= 0.0) {
            continue;
        }
        const double y = std::log(residual);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double tau_fit = -1.0 / slope;
    const double tau_expected = p.phase_inductance / p.phase_resistance;
    CHECK(tau_fit == doctest::Approx(tau_expected).epsilon(0.01));
}

TEST_CASE("motor params validation") {
    MotorParams p = test_params();
    CHECK_NOTHROW(validate(p));
    p.torque_constant = 0.2;
    CHECK_THROWS_AS(validate(p), ConfigInvalid);
    p = test_params();
    p.peak_torque = 5.0;
    CHECK_THROWS_AS(validate(p), ConfigInvalid);
    p = test_params();
    p.pole_pairs = 0;
    CHECK_THROWS_AS(validate(p), ConfigInvalid);
    p = test_params();
    p.phase_inductance = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigInvalid);
}
