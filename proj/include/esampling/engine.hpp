#pragma once

#include "esampling/analysis.hpp"
#include "esampling/clocking.hpp"
#include "esampling/eh_branch.hpp"
#include "esampling/sar_adc.hpp"
#include "esampling/signal.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esampling {

/// One eSampling experiment: stimulus, clock, ADC branch and EH branch.
struct Scenario {
    Stimulus source = SineSource{};
    /// When set, the sine frequency is re-derived as m * f_s / n_fft.
    std::optional<std::uint32_t> coherent_cycles;
    /// Measured input power; rms_power(source) is used when absent.
    std::optional<double> p_in_override;

    ClockPlan clock;
    AdcConfig adc;
    /// When true, S1 becomes ConstantR with R_ON = T_aq / (k * C_DAC).
    bool s1_from_settling = true;
    EhConfig eh;

    int n_sub = 64;
    std::uint64_t seed = 0;
    std::uint32_t n_fft = 4096;
    std::uint64_t max_periods = std::uint64_t{1} << 20;
    /// Settling factor k in k * R_ON * C_DAC <= T_aq; (n+1) ln 2 when absent.
    std::optional<double> settling_factor_k;

    bool want_adc_metrics = true;
    bool want_eh_metrics = true;
};

[[nodiscard]] double settling_factor(const Scenario& scenario);

/// Applies the derived quantities (coherent frequency, settling-solved R_ON).
[[nodiscard]] Scenario resolve(Scenario scenario);

/// Throws ValidationError for Nyquist, settling or coherence violations.
/// Expects a resolved scenario.
void validate(const Scenario& scenario);

[[nodiscard]] InputPowerSpec input_power(const Scenario& scenario);

struct CodeRecord {
    std::uint64_t period = 0;
    AdcCode code;
    double v_sampled = 0.0;
    bool saturated = false;
};

/// Sub-step samples stored column-wise. `phase[i]` is the phase of the
/// sub-step ending at `t[i]` (the t = 0 sample is tagged Acquisition).
struct TransientTrace {
    std::vector<double> t;
    std::vector<double> v_in;
    std::vector<PhaseKind> phase;
    std::vector<double> v_dac;
    std::vector<double> v_ceh;
    std::vector<CodeRecord> codes;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

struct AdcMetrics {
    double sndr_db = 0.0;
    double enob = 0.0;
};

struct SimulationResult {
    TransientTrace trace;
    std::optional<Spectrum> spectrum;
    std::optional<AdcMetrics> adc_metrics;
    std::optional<EhMetrics> eh_metrics;
    InputPowerSpec p_in;
    double v_m = 0.0;
    double energy_delivered = 0.0;  // joules into the EH node over the whole run
    std::uint64_t periods_run = 0;
    Scenario scenario;  // resolved
};

/// Runs the full transient. Throws ValidationError or NotConvergedError.
[[nodiscard]] SimulationResult run(const Scenario& scenario);

/// Window over which the storage voltage must have stopped rising: ten
/// stimulus periods (or ten sampling periods, whichever is longer).
[[nodiscard]] double settle_window(const Scenario& scenario);

struct SweepRow {
    double value = 0.0;
    std::string error;  // empty on success
    std::optional<AdcMetrics> adc;
    std::optional<EhMetrics> eh;
};

/// Parameters accepted by sweep().
[[nodiscard]] std::span<const std::string_view> sweep_parameters();

/// Applies `value` to the named parameter of `base`.
[[nodiscard]] Scenario with_parameter(Scenario base, std::string_view parameter, double value);

/// One row per value, in input order. Failing rows carry their error message.
/// Throws ValidationError for an unknown parameter.
[[nodiscard]] std::vector<SweepRow> sweep(const Scenario& base, std::string_view parameter,
                                          std::span<const double> values, unsigned jobs = 1);

}  // namespace esampling
