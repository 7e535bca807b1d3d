#include <doctest.h>

#include <cmath>
#include <random>

#include "bldcsim/pi_controller.hpp"

using namespace bldcsim;

TEST_CASE("duty_to_command clamps") {
    CHECK(duty_to_command(0.5) == 0.5);
    CHECK(duty_to_command(-3.0) == 0.0);
    CHECK(duty_to_command(7.0) == 1.0);
}

TEST_CASE("zero error keeps a zero controller at rest") {
    const PiGains g{2.0, 1.0, 10.0};
    const PiOutput out = pi_step(100.0, 100.0, 0.01, g, PiState{});
    CHECK(out.duty == 0.0);
    CHECK(out.state.integral == 0.0);
}

TEST_CASE("pure proportional response") {
    const PiGains g{2.0, 0.0, 1.0};
    const PiOutput out = pi_step(0.1, 0.0, 1e-3, g, PiState{});
    CHECK(out.u_raw == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(out.duty == doctest::Approx(0.2));
}

TEST_CASE("integral recurrence saturates and clamps: hand-stepped oracle") {
    // Kp = 0, Ki = 1, e = 0.5 held over dt = 1 s steps, limit = 1/Ki = 1:
    // duties 0.5, 1.0, 1.0, 1.0 with the integral pinned at the limit.
    const PiGains g{0.0, 1.0, 1.0};
    PiState st;
    const double expected_duty[4] = {0.5, 1.0, 1.0, 1.0};
    for (int step = 0; step < 4; ++step) {
        const PiOutput out = pi_step(0.5, 0.0, 1.0, g, st);
        CHECK(out.duty == doctest::Approx(expected_duty[step]));
        st = out.state;
    }
    CHECK(st.integral == doctest::Approx(g.integral_limit));
}

TEST_CASE("output stays in [0,1] for arbitrary input sequences") {
    const PiGains g{0.4, 2.5, 0.4};
    PiState st;
    std::mt19937_64 rng(9);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int i = 0; i < 2000; ++i) {
        const PiOutput out = pi_step(u() * 500.0, u() * 500.0, 1e-3, g, st);
        CHECK(out.duty >= 0.0);
        CHECK(out.duty <= 1.0);
        CHECK(std::fabs(out.state.integral) <= g.integral_limit);
        st = out.state;
    }
}

TEST_CASE("ki = 0 makes the controller memoryless") {
    const PiGains g{0.03, 0.0, 1.0};
    PiState st;
    const double duty_first = pi_step(20.0, 5.0, 1e-3, g, PiState{}).duty;
    std::mt19937_64 rng(4);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int i = 0; i < 100; ++i) {
        st = pi_step(u() * 100.0, u() * 100.0, 1e-3, g, st).state;
    }
    CHECK(pi_step(20.0, 5.0, 1e-3, g, st).duty == duty_first);
}

TEST_CASE("anti-windup recovers faster than the clampless variant") {
    const PiGains g{0.0, 1.0, 1.0};
    const double dt = 1.0;

    // Scripted scenario: e = +0.5 for 100 steps, then e = -0.5.
    PiState st;
    double clampless_integral = 0.0;
    int recovery_clamped = -1;
    int recovery_clampless = -1;
    for (int step = 0; step < 300; ++step) {
        const double e = step < 100 ? 0.5 : -0.5;
        const PiOutput out = pi_step(e, 0.0, dt, g, st);
        st = out.state;
        clampless_integral += e * dt;
        const double clampless_duty = duty_to_command(g.kp * e + g.ki * clampless_integral);
        if (step >= 100) {
            if (recovery_clamped < 0 && out.duty < 1.0) {
                recovery_clamped = step - 100;
            }
            if (recovery_clampless < 0 && clampless_duty < 1.0) {
                recovery_clampless = step - 100;
            }
        }
    }
    REQUIRE(recovery_clamped >= 0);
    REQUIRE(recovery_clampless >= 0);
    CHECK(recovery_clamped < recovery_clampless);
    // Bound from the clamp: ceil(integral_limit * ki / step-change) steps.
    const int bound = static_cast<int>(std::ceil(g.integral_limit * g.ki / (0.5 * dt)));
    CHECK(recovery_clamped <= bound);
}

TEST_CASE("gain validation") {
    CHECK_THROWS_AS(validate(PiGains{-1.0, 0.1, 1.0}), ConfigInvalid);
    CHECK_THROWS_AS(validate(PiGains{0.1, -0.1, 1.0}), ConfigInvalid);
    CHECK_THROWS_AS(validate(PiGains{0.1, 0.1, 0.0}), ConfigInvalid);
    CHECK_THROWS_AS(pi_step(0.0, 0.0, 0.0, PiGains{}, PiState{}), ConfigInvalid);
}
