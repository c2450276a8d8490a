#pragma once

#include "esampling/frontend.hpp"

#include <cstdint>

namespace esampling {

/// Behavioral n-bit SAR ADC over the bipolar range [-v_ref, +v_ref).
struct AdcConfig {
    int n_bits = 8;
    double v_ref = 0.4;     // volts
    double c_unit = 12e-9;  // farads
    SwitchModel s1 = ConstantRSwitch{1.0};

    void validate() const;

    [[nodiscard]] double lsb() const noexcept { return 2.0 * v_ref / code_count(); }
    [[nodiscard]] double code_count() const noexcept {
        return static_cast<double>(std::uint64_t{1} << n_bits);
    }
    [[nodiscard]] std::uint32_t max_code() const noexcept {
        return static_cast<std::uint32_t>((std::uint64_t{1} << n_bits) - 1);
    }
};

struct AdcCode {
    std::uint32_t value = 0;
    friend bool operator==(AdcCode, AdcCode) = default;
};

struct Conversion {
    AdcCode code;
    bool saturated = false;  // input fell outside [-v_ref, v_ref)
};

/// Total DAC capacitance with merged-capacitor switching: the MSB capacitor is
/// dropped, leaving (1 + sum_{i=0}^{n-2} 2^i) * C_u = 2^(n-1) * C_u. It acts as
/// the hold capacitor during acquisition.
[[nodiscard]] double c_dac(const AdcConfig& config);

/// Binary search: n comparisons of the held voltage against the DAC decision
/// threshold, MSB first. Decision boundaries resolve to the lower code.
[[nodiscard]] Conversion sar_convert_checked(double v_sampled, const AdcConfig& config);
[[nodiscard]] AdcCode sar_convert(double v_sampled, const AdcConfig& config);

/// Nearest reconstruction level by exhaustive search over all 2^n codes,
/// ties toward the lower code. Reference for sar_convert.
[[nodiscard]] AdcCode quantize_oracle(double v, const AdcConfig& config);

/// Mid-rise reconstruction level -v_ref + (code + 0.5) * LSB.
[[nodiscard]] double dac_output(AdcCode code, const AdcConfig& config);

}  // namespace esampling
