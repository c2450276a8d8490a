#include <catch_amalgamated.hpp>

#include "esampling/errors.hpp"
#include "esampling/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace esampling;
using Catch::Approx;

TEST_CASE("sample_at evaluates the sine", "[signal]") {
    SineSource s{0.4, 100.0, 0.0, 0.0, 50.0};
    CHECK(sample_at(s, 0.0) == 0.0);
    CHECK(sample_at(s, 2.5e-3) == Approx(0.4).margin(1e-15));

    s.frequency = 100.098;
    const double half_period = 1.0 / (2.0 * s.frequency);
    CHECK(std::abs(sample_at(s, half_period)) < 1e-12);
}

TEST_CASE("sample_at stays within the amplitude band", "[signal][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(1e-3, 2.0), freq(1.0, 1e7), ph(-10.0, 10.0),
        off(-1.0, 1.0), t(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const SineSource s{amp(rng), freq(rng), ph(rng), off(rng), 50.0};
        const double v = sample_at(s, t(rng));
        CHECK(v <= s.dc_offset + s.amplitude + 1e-12);
        CHECK(v >= s.dc_offset - s.amplitude - 1e-12);
    }
}

TEST_CASE("coherent_frequency", "[signal]") {
    CHECK(coherent_frequency(10e3, 4096, 41) == 100.09765625);
    CHECK(coherent_frequency(10e3, 4096, 1) == 2.44140625);
    CHECK_THROWS_AS(coherent_frequency(40e6, 4096, 2048), ValidationError);
    CHECK_THROWS_AS(coherent_frequency(10e3, 4096, 42), ValidationError);
    CHECK_THROWS_AS(coherent_frequency(10e3, 4096, 0), ValidationError);
    CHECK_THROWS_AS(coherent_frequency(10e3, 4000, 41), ValidationError);
}

TEST_CASE("coherent records hold an integer number of cycles", "[signal][property]") {
    for (std::uint32_t n_fft : {64u, 1024u, 4096u}) {
        for (std::uint32_t m = 1; m < n_fft / 2; m += 2) {
            const double f_s = 10e3;
            const double f = coherent_frequency(f_s, n_fft, m);
            CHECK(f < f_s / 2.0);
            const double cycles = f * n_fft / f_s;
            CHECK(cycles == std::round(cycles));
            const double phase_end = std::sin(2.0 * std::numbers::pi * f * (n_fft / f_s));
            CHECK(std::abs(phase_end - std::sin(0.0)) < 1e-9);
        }
    }
}

TEST_CASE("rms of a sampled sine over whole periods", "[signal][property]") {
    const SineSource s{0.4, coherent_frequency(1.0, 1u << 20, 1001), 0.3, 0.0, 50.0};
    const std::size_t n = std::size_t{1} << 20;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sample_at(s, static_cast<double>(i));
        acc += v * v;
    }
    const double rms = std::sqrt(acc / static_cast<double>(n));
    CHECK(rms == Approx(0.4 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("rms_power computed and configured", "[signal]") {
    const auto p = rms_power(SineSource{0.4, 100.0, 0.0, 0.0, 50.0});
    CHECK(p.p_in_rms == Approx(1.6e-3).epsilon(1e-12));
    CHECK(p.provenance == PowerProvenance::ComputedFromSource);

    const auto low = configured_power(27.7e-6);
    CHECK(low.p_in_rms == 27.7e-6);
    CHECK(low.provenance == PowerProvenance::Configured);
    CHECK(configured_power(27.255e-6).p_in_rms == 27.255e-6);
    CHECK_THROWS_AS(configured_power(0.0), ValidationError);
}

TEST_CASE("SineSource validation", "[signal]") {
    CHECK_THROWS_AS((SineSource{0.0, 1.0, 0.0, 0.0, 50.0}.validate()), ValidationError);
    CHECK_THROWS_AS((SineSource{1.0, -1.0, 0.0, 0.0, 50.0}.validate()), ValidationError);
    CHECK_THROWS_AS((SineSource{1.0, 1.0, 0.0, 0.0, 0.0}.validate()), ValidationError);
    CHECK_NOTHROW(SineSource{}.validate());
}

TEST_CASE("tabulated stimulus interpolates linearly", "[signal]") {
    std::istringstream in("time_s,volts\n0,0\n1e-3,0.2\n3e-3,-0.2\n");
    const auto tab = TabulatedSource::from_csv(in);
    CHECK(tab.sample_at(0.5e-3) == Approx(0.1));
    CHECK(tab.sample_at(2e-3) == Approx(0.0).margin(1e-15));
    CHECK(tab.sample_at(-1.0) == 0.0);
    CHECK(tab.sample_at(1.0) == -0.2);
    CHECK(tab.peak_magnitude() == 0.2);
    CHECK(peak_magnitude(Stimulus{tab}) == 0.2);
}

TEST_CASE("tabulated stimulus rejects bad files", "[signal]") {
    std::istringstream not_increasing("time_s,volts\n0,0\n0,1\n");
    CHECK_THROWS_AS(TabulatedSource::from_csv(not_increasing), ValidationError);
    std::istringstream bad_header("t,v\n0,0\n1,1\n");
    CHECK_THROWS_AS(TabulatedSource::from_csv(bad_header), ValidationError);
    std::istringstream junk("time_s,volts\n0,0\n1,abc\n");
    CHECK_THROWS_AS(TabulatedSource::from_csv(junk), ValidationError);
}
