#include <catch_amalgamated.hpp>

#include "esampling/analysis.hpp"
#include "esampling/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace esampling;
using Catch::Approx;

namespace {

// Direct O(N^2) DFT power of bin k, normalized like Spectrum::power.
double dft_bin_power(const std::vector<double>& x, std::size_t k) {
    const auto n = x.size();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / n;
        acc += x[i] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    const double folded = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    return folded * std::norm(acc) / (static_cast<double>(n) * n);
}

std::vector<double> sine(std::size_t n, std::size_t bin, double amp, double phase = 0.3) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(bin * i % n) / n + phase);
    }
    return x;
}

AdcConfig adc8() {
    AdcConfig cfg;
    cfg.n_bits = 8;
    cfg.v_ref = 0.4;
    return cfg;
}

}  // namespace

TEST_CASE("quantized coherent sine peaks at the signal bin", "[analysis]") {
    const auto cfg = adc8();
    const auto x = sine(1024, 41, 0.39);
    std::vector<AdcCode> codes;
    for (double v : x) {
        codes.push_back(sar_convert(v, cfg));
    }
    const auto spec = spectrum(codes, cfg, 10e3, 41, 1024);
    REQUIRE(spec.power.size() == 513);
    for (std::size_t k = 1; k < spec.power.size(); ++k) {
        if (k != 41) {
            CHECK(spec.power[k] < spec.power[41] * 1e-3);
        }
    }
    CHECK(spec.bin_frequency(41) == Approx(41 * 10e3 / 1024));
}

TEST_CASE("constant input leaves only DC", "[analysis]") {
    const std::vector<double> x(256, 0.123);
    const auto spec = spectrum_of_samples(x, 1.0, 5);
    CHECK(spec.power[0] == Approx(0.123 * 0.123).epsilon(1e-12));
    for (std::size_t k = 1; k < spec.power.size(); ++k) {
        CHECK(spec.power[k] < 1e-28);
    }
}

TEST_CASE("two-tone record agrees with a direct DFT", "[analysis]") {
    const std::size_t n = 512;
    const std::size_t m = 7;
    auto x = sine(n, m, 0.3, 0.1);
    const auto third = sine(n, 3 * m, 0.1, 1.2);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] += third[i];
    }
    const auto spec = spectrum_of_samples(x, 1.0, m);
    for (std::size_t k : {std::size_t{0}, m, 3 * m, std::size_t{100}, n / 2}) {
        CHECK(spec.power[k] == Approx(dft_bin_power(x, k)).margin(1e-15));
    }
    CHECK(spec.power[m] / spec.power[3 * m] == Approx(9.0).epsilon(1e-9));
    CHECK(sndr(spec) == Approx(10.0 * std::log10(9.0)).epsilon(1e-9));
}

TEST_CASE("spectrum obeys Parseval", "[analysis][property]") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (std::size_t n : {64u, 1024u, 4096u}) {
        std::vector<double> x(n);
        double ms = 0.0;
        for (auto& v : x) {
            v = noise(rng) + 0.05;
            ms += v * v;
        }
        ms /= static_cast<double>(n);
        const auto spec = spectrum_of_samples(x, 1.0, 3);
        double total = 0.0;
        for (double p : spec.power) {
            total += p;
        }
        CHECK(total == Approx(ms).epsilon(1e-9));
    }
}

TEST_CASE("SNDR ignores a constant offset", "[analysis][property]") {
    const auto cfg = adc8();
    const auto x = sine(4096, 41, 0.3);
    std::vector<AdcCode> codes;
    std::vector<AdcCode> shifted;
    for (double v : x) {
        codes.push_back(sar_convert(v, cfg));
        shifted.push_back(AdcCode{codes.back().value + 17});
    }
    const double a = sndr(spectrum(codes, cfg, 1.0, 41, 4096));
    const double b = sndr(spectrum(shifted, cfg, 1.0, 41, 4096));
    CHECK(a == Approx(b).epsilon(1e-9));
}

TEST_CASE("ideal 8-bit full-scale sine reaches the quantization limit", "[analysis]") {
    const auto cfg = adc8();
    const std::size_t n = 4096;
    const std::size_t bin = 41;
    const auto x = sine(n, bin, cfg.v_ref);
    std::vector<AdcCode> codes;
    std::vector<double> recon;
    for (double v : x) {
        codes.push_back(sar_convert(v, cfg));
        recon.push_back(dac_output(codes.back(), cfg));
    }
    const double s = sndr(spectrum(codes, cfg, 10e3, bin, n));
    CHECK(s == Approx(6.02 * 8 + 1.76).margin(0.3));

    // Time-domain oracle: least-squares fit a*sin + b*cos + c at the known
    // frequency (orthogonal over whole cycles), SNR = fitted power / residual power.
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(bin * i % n) / n;
        a += recon[i] * std::sin(w);
        b += recon[i] * std::cos(w);
        c += recon[i];
    }
    a *= 2.0 / n;
    b *= 2.0 / n;
    c /= n;
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(bin * i % n) / n;
        const double e = recon[i] - (a * std::sin(w) + b * std::cos(w) + c);
        resid += e * e;
    }
    resid /= n;
    const double fit_snr = 10.0 * std::log10(0.5 * (a * a + b * b) / resid);
    CHECK(s == Approx(fit_snr).margin(1e-6));
}

TEST_CASE("unquantized sine reports infinite SNDR", "[analysis]") {
    const auto x = sine(4096, 41, 0.4);
    CHECK(sndr(spectrum_of_samples(x, 1.0, 41)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("spectrum input validation", "[analysis]") {
    const auto cfg = adc8();
    std::vector<AdcCode> codes(100);
    CHECK_THROWS_AS(spectrum(codes, cfg, 1.0, 3, 128), ValidationError);
    std::vector<double> odd(100, 0.0);
    CHECK_THROWS_AS(spectrum_of_samples(odd, 1.0, 3), ValidationError);
    std::vector<double> x(128, 0.0);
    CHECK_THROWS_AS(spectrum_of_samples(x, 1.0, 0), ValidationError);
    CHECK_THROWS_AS(spectrum_of_samples(x, 1.0, 64), ValidationError);
}

TEST_CASE("enob inverts the ideal SNDR formula", "[analysis]") {
    CHECK(enob(49.0) == Approx(7.85).margin(0.005));
    CHECK(enob(48.52) == Approx(7.77).margin(0.005));
    for (int n = 1; n <= 16; ++n) {
        const double e = enob(6.02 * n + 1.76);
        CHECK(std::abs(e - n) <= 4 * std::numeric_limits<double>::epsilon() * n);
    }
}

TEST_CASE("spectrum CSV export", "[analysis]") {
    const auto spec = spectrum_of_samples(sine(16, 3, 0.5), 16.0, 3);
    std::ostringstream out;
    write_spectrum_csv(out, spec);
    const auto text = out.str();
    CHECK(text.rfind("bin,freq_hz,power_db\n", 0) == 0);
    CHECK(text.find("\n3,3,") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
}
