#pragma once

#include "esampling/sar_adc.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace esampling {

/// One-sided power spectrum of a coherent record. `power[k]` for
/// k = 0..n_fft/2 is normalized so that the bins sum to the mean square of
/// the record (DC and Nyquist bins single, others doubled).
struct Spectrum {
    std::vector<double> power;
    std::size_t n_fft = 0;
    double f_s = 0.0;
    std::size_t signal_bin = 0;

    [[nodiscard]] double bin_frequency(std::size_t k) const noexcept {
        return static_cast<double>(k) * f_s / static_cast<double>(n_fft);
    }
};

/// Noise-plus-distortion below this fraction of the signal power is treated as
/// the floating-point floor and reported as an infinite SNDR (200 dB).
inline constexpr double kNoiseFloorRatio = 1e-20;

/// Rectangular-window spectrum of an arbitrary real record. Throws
/// ValidationError unless the length is a power of two and
/// 0 < signal_bin < n_fft/2.
[[nodiscard]] Spectrum spectrum_of_samples(std::span<const double> samples, double f_s,
                                           std::size_t signal_bin);

/// Spectrum of the dac_output reconstruction of `codes`. The record length
/// must equal `n_fft`.
[[nodiscard]] Spectrum spectrum(std::span<const AdcCode> codes, const AdcConfig& config,
                                double f_s, std::size_t expected_signal_bin, std::size_t n_fft);

/// Signal-bin power over all other non-DC bins up to Nyquist, in dB. Returns
/// +infinity when the residual power is at the numerical floor.
[[nodiscard]] double sndr(const Spectrum& spec);

/// (sndr_db - 1.76) / 6.02.
[[nodiscard]] double enob(double sndr_db);

/// Writes `bin,freq_hz,power_db`; empty bins are clamped to -300 dB.
void write_spectrum_csv(std::ostream& out, const Spectrum& spec);

}  // namespace esampling
