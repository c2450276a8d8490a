#include <catch_amalgamated.hpp>

#include "esampling/errors.hpp"
#include "esampling/frontend.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace esampling;
using Catch::Approx;

namespace {

// Forward-Euler reference for C dv/dt = (u(t) - v)/R with linear u.
double euler_oracle(double v0, double u0, double u1, double r, double c, double dt,
                    int steps = 1'000'000) {
    const double h = dt / steps;
    const double slope = (u1 - u0) / dt;
    double v = v0;
    for (int i = 0; i < steps; ++i) {
        const double u = u0 + slope * (i * h);
        v += h * (u - v) / (r * c);
    }
    return v;
}

}  // namespace

TEST_CASE("r_on per switch model", "[frontend]") {
    CHECK(r_on(ConstantRSwitch{6.51}, -0.3) == 6.51);
    CHECK(r_on(ConstantRSwitch{6.51}, 0.4) == 6.51);
    CHECK(r_on(IdealSwitch{}, 0.2) == kIdealSwitchResistance);

    const PassTransistorSwitch pmos{1e-3, 0.4, 0.0};
    CHECK(r_on(pmos, 1.2) == Approx(1250.0).epsilon(1e-12));
    CHECK_THROWS_AS(r_on(pmos, 0.4), CutoffError);
    CHECK_THROWS_AS(r_on(pmos, -0.2), CutoffError);
}

TEST_CASE("pass transistor r_on falls as overdrive grows", "[frontend][property]") {
    const PassTransistorSwitch nmos{2e-3, 0.45, 1.8};
    double previous = std::numeric_limits<double>::infinity();
    for (double vgs = 0.46; vgs < 1.8; vgs += 0.01) {
        const double r = r_on(nmos, nmos.v_gate - vgs);
        CHECK(r < previous);
        previous = r;
    }
}

TEST_CASE("worst-case r_on over a signal range", "[frontend]") {
    const PassTransistorSwitch nmos{1e-3, 0.4, 1.8};
    CHECK(worst_case_r_on(nmos, -0.4, 0.4) == Approx(r_on(nmos, 0.4)));
    CHECK_THROWS_AS(worst_case_r_on(nmos, -0.4, 1.5), CutoffError);
    CHECK(worst_case_r_on(ConstantRSwitch{3.0}, -1.0, 1.0) == 3.0);
}

TEST_CASE("switch validation", "[frontend]") {
    CHECK_THROWS_AS(validate(ConstantRSwitch{0.0}, "switch.s1"), ValidationError);
    CHECK_THROWS_AS(validate(PassTransistorSwitch{0.0, 0.4, 0.0}, "switch.s2"), ValidationError);
    CHECK_THROWS_AS(validate(PassTransistorSwitch{1e-3, -0.1, 0.0}, "switch.s2"),
                    ValidationError);
    CHECK_NOTHROW(validate(IdealSwitch{}, "switch.s1"));
}

TEST_CASE("rc_step_linear closed form", "[frontend]") {
    const double r = 1e3;
    const double c = 1e-6;
    const double tau = r * c;

    // Step into a constant 1 V drive for one time constant.
    const auto step = rc_step_linear({0.0, 0.0}, 1.0, 1.0, r, c, tau);
    CHECK(step.v_cap == Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(step.t == tau);

    // Equilibrium is a fixed point.
    CHECK(rc_step_linear({0.3, 0.0}, 0.3, 0.3, r, c, 0.1 * tau).v_cap == 0.3);

    // Ramp 0 -> 1 V over one time constant: 1 - s*tau + s*tau*e^-1 = e^-1.
    const auto ramp = rc_step_linear({0.0, 0.0}, 0.0, 1.0, r, c, tau);
    CHECK(ramp.v_cap == Approx(std::exp(-1.0)).epsilon(1e-12));
    const double oracle = euler_oracle(0.0, 0.0, 1.0, r, c, tau);
    CHECK(std::abs(ramp.v_cap - oracle) / std::abs(oracle) < 1e-6);
}

TEST_CASE("rc_step_linear matches the Euler oracle across stiffness", "[frontend][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> volts(-1.0, 1.0);
    for (double ratio : {0.01, 0.1, 1.0, 10.0, 100.0}) {  // tau / dt
        const double r = 50.0;
        const double c = 1e-9;
        const double dt = r * c / ratio;
        const double v0 = volts(rng);
        const double u0 = volts(rng);
        const double u1 = volts(rng);
        const double exact = rc_step_linear({v0, 0.0}, u0, u1, r, c, dt).v_cap;
        const double oracle = euler_oracle(v0, u0, u1, r, c, dt);
        const double scale = std::max({std::abs(exact), std::abs(v0), std::abs(u0), std::abs(u1)});
        CHECK(std::abs(exact - oracle) / scale < 1e-6);
    }
}

TEST_CASE("rc_step_linear composes over half steps", "[frontend][property]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> volts(-1.0, 1.0);
    std::uniform_real_distribution<double> log_ratio(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double r = 100.0;
        const double c = 1e-6;
        const double dt = r * c * std::pow(10.0, log_ratio(rng));
        const double v0 = volts(rng);
        const double u0 = volts(rng);
        const double u1 = volts(rng);
        const double um = 0.5 * (u0 + u1);
        const auto whole = rc_step_linear({v0, 0.0}, u0, u1, r, c, dt);
        const auto half = rc_step_linear(rc_step_linear({v0, 0.0}, u0, um, r, c, dt / 2), um,
                                         u1, r, c, dt / 2);
        const double scale = std::max({std::abs(v0), std::abs(u0), std::abs(u1)});
        CHECK(std::abs(whole.v_cap - half.v_cap) <= 1e-12 * scale);
    }
}

TEST_CASE("rc_step_linear with constant drive never overshoots", "[frontend][property]") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> volts(-1.0, 1.0);
    std::uniform_real_distribution<double> log_dt(-9.0, -3.0);
    for (int i = 0; i < 2000; ++i) {
        const double v0 = volts(rng);
        const double u = volts(rng);
        const double v1 = rc_step_linear({v0, 0.0}, u, u, 1e3, 1e-9, std::pow(10.0, log_dt(rng))).v_cap;
        CHECK(std::abs(u - v1) <= std::abs(u - v0));
        // No crossing beyond rounding of the target value.
        const bool same_side = (u - v1) * (u - v0) >= 0.0;
        CHECK((same_side || std::abs(u - v1) <= 4.0 * std::numeric_limits<double>::epsilon()));
    }
}

TEST_CASE("settling_error", "[frontend]") {
    CHECK(settling_error(1e3, 1e-9, 1e-6) == Approx(std::exp(-1.0)).epsilon(1e-14));
    const double k = 9.0 * std::log(2.0);
    CHECK(settling_error(1.0, 1.0, k) == Approx(std::ldexp(1.0, -9)).epsilon(1e-12));
    CHECK(settling_error(1.0, 1.0, 1e-15) == Approx(1.0).epsilon(1e-12));
    CHECK(default_settling_factor(8) == Approx(k).epsilon(1e-15));
}
