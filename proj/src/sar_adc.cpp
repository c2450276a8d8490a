#include "esampling/sar_adc.hpp"

#include "esampling/errors.hpp"

#include <cmath>
#include <limits>

namespace esampling {

void AdcConfig::validate() const {
    if (n_bits < 1 || n_bits > 16) {
        throw ValidationError("adc.n_bits must lie in [1, 16]", "adc.n_bits");
    }
    if (!(v_ref > 0.0)) {
        throw ValidationError("adc.v_ref must be positive", "adc.v_ref");
    }
    if (!(c_unit > 0.0)) {
        throw ValidationError("adc.c_unit_f must be positive", "adc.c_unit_f");
    }
    esampling::validate(s1, "switch.s1");
}

double c_dac(const AdcConfig& config) {
    double units = 1.0;
    for (int i = 0; i <= config.n_bits - 2; ++i) {
        units += std::ldexp(1.0, i);
    }
    return units * config.c_unit;
}

Conversion sar_convert_checked(double v_sampled, const AdcConfig& config) {
    std::uint32_t code = 0;
    for (int bit = config.n_bits - 1; bit >= 0; --bit) {
        const std::uint32_t trial = code | (std::uint32_t{1} << bit);
        // Decision between codes trial-1 and trial, phrased as a distance
        // comparison to their levels so boundary rounding matches nearest-level
        // quantization bit for bit; equal distances keep the lower code.
        const double above = std::abs(v_sampled - dac_output(AdcCode{trial}, config));
        const double below = std::abs(v_sampled - dac_output(AdcCode{trial - 1}, config));
        if (above < below) {
            code = trial;
        }
    }
    const bool saturated = !(v_sampled >= -config.v_ref && v_sampled < config.v_ref);
    return {AdcCode{code}, saturated};
}

AdcCode sar_convert(double v_sampled, const AdcConfig& config) {
    return sar_convert_checked(v_sampled, config).code;
}

AdcCode quantize_oracle(double v, const AdcConfig& config) {
    std::uint32_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::uint32_t code = 0; code <= config.max_code(); ++code) {
        const double err = std::abs(v - dac_output(AdcCode{code}, config));
        if (err < best_err) {
            best_err = err;
            best = code;
        }
    }
    return AdcCode{best};
}

double dac_output(AdcCode code, const AdcConfig& config) {
    return -config.v_ref + (static_cast<double>(code.value) + 0.5) * config.lsb();
}

}  // namespace esampling
