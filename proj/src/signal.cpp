#include "esampling/signal.hpp"

#include "esampling/csv.hpp"
#include "esampling/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

namespace esampling {

void SineSource::validate() const {
    if (!(amplitude > 0.0)) {
        throw ValidationError("signal amplitude must be positive", "signal.amplitude_v");
    }
    if (!(frequency > 0.0)) {
        throw ValidationError("signal frequency must be positive", "signal.frequency_hz");
    }
    if (!(source_resistance > 0.0)) {
        throw ValidationError("source resistance must be positive",
                              "signal.source_resistance_ohm");
    }
}

double sample_at(const SineSource& source, double t) {
    return source.dc_offset +
           source.amplitude * std::sin(2.0 * std::numbers::pi * source.frequency * t + source.phase);
}

TabulatedSource::TabulatedSource(std::vector<double> times, std::vector<double> volts)
    : times_(std::move(times)), volts_(std::move(volts)) {
    if (times_.size() != volts_.size() || times_.size() < 2) {
        throw ValidationError("tabulated stimulus needs at least two (time, volts) rows",
                              "signal.stimulus_csv");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw ValidationError("tabulated stimulus time must be strictly increasing (row " +
                                      std::to_string(i + 1) + ")",
                                  "signal.stimulus_csv");
        }
    }
    for (double v : volts_) {
        if (!std::isfinite(v)) {
            throw ValidationError("tabulated stimulus contains a non-finite voltage",
                                  "signal.stimulus_csv");
        }
    }
}

TabulatedSource TabulatedSource::from_csv(std::istream& in) {
    csv::Table table;
    try {
        table = csv::read(in);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("stimulus csv: ") + e.what(), "signal.stimulus_csv");
    }
    if (table.header != std::vector<std::string>{"time_s", "volts"}) {
        throw ValidationError("stimulus csv header must be 'time_s,volts'", "signal.stimulus_csv");
    }
    std::vector<double> t;
    std::vector<double> v;
    t.reserve(table.rows.size());
    v.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        try {
            t.push_back(csv::parse_double(table.rows[i][0]));
            v.push_back(csv::parse_double(table.rows[i][1]));
        } catch (const std::invalid_argument& e) {
            throw ValidationError("stimulus csv line " + std::to_string(table.line_numbers[i]) +
                                      ": " + e.what(),
                                  "signal.stimulus_csv");
        }
    }
    return TabulatedSource(std::move(t), std::move(v));
}

TabulatedSource TabulatedSource::from_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open stimulus file " + path.string(), "signal.stimulus_csv");
    }
    return from_csv(in);
}

double TabulatedSource::sample_at(double t) const {
    if (t <= times_.front()) {
        return volts_.front();
    }
    if (t >= times_.back()) {
        return volts_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto hi = static_cast<std::size_t>(it - times_.begin());
    const auto lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return volts_[lo] + w * (volts_[hi] - volts_[lo]);
}

double TabulatedSource::peak_magnitude() const {
    double peak = 0.0;
    for (double v : volts_) {
        peak = std::max(peak, std::abs(v));
    }
    return peak;
}

double sample_at(const Stimulus& stimulus, double t) {
    return std::visit(
        [t](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SineSource>) {
                return esampling::sample_at(s, t);
            } else {
                return s.sample_at(t);
            }
        },
        stimulus);
}

double peak_magnitude(const Stimulus& stimulus) {
    return std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SineSource>) {
                return std::abs(s.dc_offset) + s.amplitude;
            } else {
                return s.peak_magnitude();
            }
        },
        stimulus);
}

double coherent_frequency(double f_s, std::uint32_t n_fft, std::uint32_t m_cycles) {
    if (!(f_s > 0.0)) {
        throw ValidationError("sampling frequency must be positive", "clock.f_s_hz");
    }
    if (!is_power_of_two(n_fft) || n_fft < 4) {
        throw ValidationError("n_fft must be a power of two >= 4", "engine.n_fft");
    }
    if (m_cycles < 1 || m_cycles % 2 == 0) {
        throw ValidationError("coherent cycle count must be odd and >= 1", "signal.m_cycles");
    }
    if (m_cycles >= n_fft / 2) {
        throw ValidationError("coherent cycle count must be below n_fft/2 (Nyquist)",
                              "signal.m_cycles");
    }
    return static_cast<double>(m_cycles) * f_s / static_cast<double>(n_fft);
}

InputPowerSpec rms_power(const SineSource& source) {
    return {source.amplitude * source.amplitude / (2.0 * source.source_resistance),
            PowerProvenance::ComputedFromSource};
}

InputPowerSpec configured_power(double p_in_rms) {
    if (!(p_in_rms > 0.0)) {
        throw ValidationError("input power must be positive", "signal.p_in_w");
    }
    return {p_in_rms, PowerProvenance::Configured};
}

}  // namespace esampling
