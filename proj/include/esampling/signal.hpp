#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

namespace esampling {

/// Sinusoidal stimulus v(t) = dc_offset + amplitude * sin(2*pi*frequency*t + phase).
struct SineSource {
    double amplitude = 0.4;          // V_M, volts
    double frequency = 100.0;        // hertz
    double phase = 0.0;              // radians
    double dc_offset = 0.0;          // volts
    double source_resistance = 50.0; // ohms

    /// Throws ValidationError when amplitude, frequency or resistance is not positive.
    void validate() const;
};

enum class PowerProvenance { Configured, ComputedFromSource };

struct InputPowerSpec {
    double p_in_rms = 0.0;  // watts
    PowerProvenance provenance = PowerProvenance::ComputedFromSource;
};

/// Piecewise-linear stimulus imported from a `time_s,volts` CSV.
/// Evaluation before the first / after the last row holds the end value.
class TabulatedSource {
public:
    TabulatedSource(std::vector<double> times, std::vector<double> volts);

    static TabulatedSource from_csv(std::istream& in);
    static TabulatedSource from_csv_file(const std::filesystem::path& path);

    [[nodiscard]] double sample_at(double t) const;
    [[nodiscard]] double peak_magnitude() const;
    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<double>& volts() const noexcept { return volts_; }

private:
    std::vector<double> times_;
    std::vector<double> volts_;
};

using Stimulus = std::variant<SineSource, TabulatedSource>;

[[nodiscard]] double sample_at(const SineSource& source, double t);
[[nodiscard]] double sample_at(const Stimulus& stimulus, double t);

/// Largest |v(t)| the stimulus reaches (V_M).
[[nodiscard]] double peak_magnitude(const Stimulus& stimulus);

/// f_in = m_cycles * f_s / n_fft. n_fft must be a power of two and m_cycles odd
/// with m_cycles < n_fft/2, so the record holds an integer, coprime cycle count.
[[nodiscard]] double coherent_frequency(double f_s, std::uint32_t n_fft, std::uint32_t m_cycles);

/// amplitude^2 / (2 * source_resistance), tagged ComputedFromSource.
[[nodiscard]] InputPowerSpec rms_power(const SineSource& source);

/// A measured/configured input power (tagged Configured).
[[nodiscard]] InputPowerSpec configured_power(double p_in_rms);

[[nodiscard]] constexpr bool is_power_of_two(std::uint64_t x) noexcept {
    return x != 0 && (x & (x - 1)) == 0;
}

}  // namespace esampling
