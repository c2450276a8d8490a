#include "esampling/analysis.hpp"

#include "esampling/csv.hpp"
#include "esampling/errors.hpp"
#include "esampling/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>

namespace esampling {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> real_fft(std::span<const double> samples) {
    const auto n = samples.size();
    std::vector<double> in(samples.begin(), samples.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

Spectrum spectrum_of_samples(std::span<const double> samples, double f_s,
                             std::size_t signal_bin) {
    const auto n = samples.size();
    if (!is_power_of_two(n) || n < 4) {
        throw ValidationError("record length must be a power of two >= 4", "engine.n_fft");
    }
    if (signal_bin == 0 || signal_bin >= n / 2) {
        throw ValidationError("signal bin must lie in (0, n_fft/2)");
    }
    const auto bins = real_fft(samples);
    Spectrum spec;
    spec.n_fft = n;
    spec.f_s = f_s;
    spec.signal_bin = signal_bin;
    spec.power.resize(n / 2 + 1);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double folded = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        spec.power[k] = folded * std::norm(bins[k]) * scale;
    }
    return spec;
}

Spectrum spectrum(std::span<const AdcCode> codes, const AdcConfig& config, double f_s,
                  std::size_t expected_signal_bin, std::size_t n_fft) {
    if (codes.size() != n_fft) {
        throw ValidationError("code record has " + std::to_string(codes.size()) +
                              " samples, expected n_fft = " + std::to_string(n_fft));
    }
    std::vector<double> recon(codes.size());
    std::transform(codes.begin(), codes.end(), recon.begin(),
                   [&](AdcCode c) { return dac_output(c, config); });
    return spectrum_of_samples(recon, f_s, expected_signal_bin);
}

double sndr(const Spectrum& spec) {
    const double signal = spec.power.at(spec.signal_bin);
    double noise = 0.0;
    for (std::size_t k = 1; k < spec.power.size(); ++k) {
        if (k != spec.signal_bin) {
            noise += spec.power[k];
        }
    }
    if (noise <= kNoiseFloorRatio * signal) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(signal / noise);
}

double enob(double sndr_db) {
    return (sndr_db - 1.76) / 6.02;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
    out << "bin,freq_hz,power_db\n";
    for (std::size_t k = 0; k < spec.power.size(); ++k) {
        const double db = spec.power[k] > 0.0 ? std::max(10.0 * std::log10(spec.power[k]), -300.0)
                                              : -300.0;
        out << k << ',' << csv::format_double(spec.bin_frequency(k)) << ','
            << csv::format_double(db) << '\n';
    }
}

}  // namespace esampling
