#include "esampling/engine.hpp"

#include "esampling/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

namespace esampling {

namespace {

const SineSource* as_sine(const Stimulus& s) {
    return std::get_if<SineSource>(&s);
}

// Signal range the sampling switch must conduct over.
std::pair<double, double> signal_range(const Stimulus& s) {
    if (const auto* sine = as_sine(s)) {
        return {sine->dc_offset - sine->amplitude, sine->dc_offset + sine->amplitude};
    }
    const auto& tab = std::get<TabulatedSource>(s);
    const auto [lo, hi] = std::minmax_element(tab.volts().begin(), tab.volts().end());
    return {*lo, *hi};
}

class Simulator {
public:
    explicit Simulator(const Scenario& sc) : sc_(sc), c_dac_(c_dac(sc.adc)) {
        auto& tr = result_.trace;
        tr.t.push_back(0.0);
        tr.v_in.push_back(sample_at(sc_.source, 0.0));
        tr.phase.push_back(PhaseKind::Acquisition);
        tr.v_dac.push_back(0.0);
        tr.v_ceh.push_back(0.0);
    }

    void advance_to(std::uint64_t n_periods) {
        ClockPlan plan = sc_.clock;
        plan.n_periods = n_periods;
        auto& tr = result_.trace;
        const std::size_t extra = (n_periods - periods_) * 2 * static_cast<std::size_t>(sc_.n_sub);
        tr.t.reserve(tr.t.size() + extra);
        tr.v_in.reserve(tr.v_in.size() + extra);
        tr.phase.reserve(tr.phase.size() + extra);
        tr.v_dac.reserve(tr.v_dac.size() + extra);
        tr.v_ceh.reserve(tr.v_ceh.size() + extra);
        for (std::uint64_t k = periods_; k < n_periods; ++k) {
            acquire(plan.acquisition_segment(k));
            const auto conv = sar_convert_checked(v_dac_, sc_.adc);
            tr.codes.push_back({k, conv.code, v_dac_, conv.saturated});
            harvest(plan.harvest_segment(k));
        }
        periods_ = n_periods;
    }

    [[nodiscard]] std::uint64_t periods() const noexcept { return periods_; }
    SimulationResult& result() noexcept { return result_; }

private:
    template <class Step>
    void walk(const PhaseSegment& seg, Step&& step) {
        const int n = sc_.n_sub;
        const double width = seg.duration();
        double t0 = seg.t_start;
        double u0 = sample_at(sc_.source, t0);
        for (int j = 1; j <= n; ++j) {
            const double t1 =
                j == n ? seg.t_end : seg.t_start + width * static_cast<double>(j) / n;
            const double u1 = sample_at(sc_.source, t1);
            step(u0, u1, t1 - t0);
            record(t1, u1, seg.kind);
            t0 = t1;
            u0 = u1;
        }
    }

    void acquire(const PhaseSegment& seg) {
        walk(seg, [this](double u0, double u1, double dt) {
            double r = 0.0;
            try {
                r = r_on(sc_.adc.s1, 0.5 * (u0 + u1));
            } catch (const CutoffError&) {
                return;  // S1 not conducting; the DAC node floats
            }
            v_dac_ = rc_step_linear({v_dac_, 0.0}, u0, u1, r, c_dac_, dt).v_cap;
        });
    }

    void harvest(const PhaseSegment& seg) {
        walk(seg, [this](double u0, double u1, double dt) {
            const auto out = eh_step_detailed({v_ceh_, 0.0}, u0, u1, sc_.eh, dt);
            v_ceh_ = out.state.v_cap;
            result_.energy_delivered += out.energy_delivered;
        });
    }

    void record(double t, double v_in, PhaseKind kind) {
        auto& tr = result_.trace;
        tr.t.push_back(t);
        tr.v_in.push_back(v_in);
        tr.phase.push_back(kind);
        tr.v_dac.push_back(v_dac_);
        tr.v_ceh.push_back(v_ceh_);
    }

    const Scenario& sc_;
    double c_dac_;
    double v_dac_ = 0.0;
    double v_ceh_ = 0.0;
    std::uint64_t periods_ = 0;
    SimulationResult result_;
};

std::uint64_t periods_covering(double seconds, double t_s) {
    return static_cast<std::uint64_t>(std::ceil(seconds / t_s - 1e-9));
}

}  // namespace

double settling_factor(const Scenario& scenario) {
    return scenario.settling_factor_k.value_or(default_settling_factor(scenario.adc.n_bits));
}

Scenario resolve(Scenario sc) {
    if (sc.coherent_cycles) {
        if (auto* sine = std::get_if<SineSource>(&sc.source)) {
            sine->frequency = coherent_frequency(sc.clock.f_s, sc.n_fft, *sc.coherent_cycles);
        }
    }
    if (sc.s1_from_settling) {
        sc.clock.validate();
        sc.adc.validate();
        const double k = settling_factor(sc);
        if (!(k > 0.0)) {
            throw ValidationError("engine.settling_factor_k must be positive",
                                  "engine.settling_factor_k");
        }
        sc.adc.s1 = ConstantRSwitch{sc.clock.t_aq() / (k * c_dac(sc.adc))};
    }
    return sc;
}

void validate(const Scenario& sc) {
    sc.clock.validate();
    sc.adc.validate();
    sc.eh.validate();
    if (const auto* sine = as_sine(sc.source)) {
        sine->validate();
        if (!(sine->frequency < sc.clock.f_s / 2.0)) {
            throw ValidationError("signal frequency violates Nyquist (f_in >= f_s/2)",
                                  "signal.frequency_hz");
        }
    }
    if (sc.p_in_override) {
        (void)configured_power(*sc.p_in_override);
    }
    if (sc.n_sub < 1) {
        throw ValidationError("engine.n_sub must be >= 1", "engine.n_sub");
    }
    if (!is_power_of_two(sc.n_fft) || sc.n_fft < 4) {
        throw ValidationError("engine.n_fft must be a power of two >= 4", "engine.n_fft");
    }
    const double k = settling_factor(sc);
    if (!(k > 0.0)) {
        throw ValidationError("engine.settling_factor_k must be positive",
                              "engine.settling_factor_k");
    }
    const auto [lo, hi] = signal_range(sc.source);
    double r_worst = 0.0;
    try {
        r_worst = worst_case_r_on(sc.adc.s1, lo, hi);
    } catch (const CutoffError&) {
        throw ValidationError("sampling switch S1 cuts off inside the signal range",
                              "switch.s1.type");
    }
    const double needed = k * r_worst * c_dac(sc.adc);
    if (needed > sc.clock.t_aq() * (1.0 + 1e-12)) {
        throw ValidationError("acquisition too short: k * R_ON * C_DAC = " +
                                  std::to_string(needed) + " s exceeds T_aq = " +
                                  std::to_string(sc.clock.t_aq()) + " s",
                              "switch.s1.r_on");
    }
    if (sc.want_adc_metrics) {
        const auto* sine = as_sine(sc.source);
        if (sine == nullptr) {
            throw ValidationError("spectral metrics need a coherent sine stimulus",
                                  "output.metrics");
        }
        const double bin = sine->frequency * sc.n_fft / sc.clock.f_s;
        if (std::abs(bin - std::round(bin)) > 1e-9 * std::max(1.0, bin) || std::round(bin) < 1.0) {
            throw ValidationError("stimulus is not coherent with the n_fft record",
                                  "signal.frequency_hz");
        }
    }
    const auto required = std::max<std::uint64_t>(sc.clock.n_periods,
                                                  sc.want_adc_metrics ? sc.n_fft : 0);
    if (sc.max_periods < required) {
        throw ValidationError("engine.max_periods is below the required record length",
                              "engine.max_periods");
    }
}

InputPowerSpec input_power(const Scenario& sc) {
    if (sc.p_in_override) {
        return configured_power(*sc.p_in_override);
    }
    if (const auto* sine = as_sine(sc.source)) {
        return rms_power(*sine);
    }
    throw ValidationError("tabulated stimulus needs signal.p_in_w", "signal.p_in_w");
}

double settle_window(const Scenario& sc) {
    double period = sc.clock.t_s();
    if (const auto* sine = as_sine(sc.source)) {
        period = std::max(period, 1.0 / sine->frequency);
    }
    return 10.0 * period;
}

SimulationResult run(const Scenario& input) {
    const Scenario sc = resolve(input);
    validate(sc);
    const InputPowerSpec p_in = sc.want_eh_metrics ? input_power(sc) : InputPowerSpec{};
    const double v_m = peak_magnitude(sc.source);

    std::uint64_t target = std::max<std::uint64_t>(sc.clock.n_periods,
                                                   sc.want_adc_metrics ? sc.n_fft : 0);
    const double window = settle_window(sc);
    const auto window_periods = periods_covering(window, sc.clock.t_s());
    if (sc.want_eh_metrics) {
        target = std::max(target, window_periods + 1);
    }
    if (target > sc.max_periods) {
        throw NotConvergedError("settling window needs more than engine.max_periods periods");
    }

    Simulator sim(sc);
    sim.advance_to(target);

    std::optional<EhMetrics> eh;
    if (sc.want_eh_metrics) {
        while (true) {
            const auto& tr = sim.result().trace;
            try {
                eh = steady_state_metrics(tr.t, tr.v_ceh, p_in, sc.eh, v_m, sc.eh.steady_tol,
                                          window);
                break;
            } catch (const NotConvergedError&) {
                if (sim.periods() >= sc.max_periods) {
                    throw;
                }
            }
            sim.advance_to(std::min(sc.max_periods, sim.periods() + window_periods));
        }
    }

    SimulationResult result = std::move(sim.result());
    result.eh_metrics = eh;
    result.p_in = p_in;
    result.v_m = v_m;
    result.periods_run = sim.periods();
    if (sc.want_adc_metrics) {
        const auto& sine = std::get<SineSource>(sc.source);
        const auto bin = static_cast<std::size_t>(std::llround(sine.frequency * sc.n_fft / sc.clock.f_s));
        std::vector<AdcCode> codes(sc.n_fft);
        for (std::size_t i = 0; i < codes.size(); ++i) {
            codes[i] = result.trace.codes[i].code;
        }
        result.spectrum = spectrum(codes, sc.adc, sc.clock.f_s, bin, sc.n_fft);
        const double s = sndr(*result.spectrum);
        result.adc_metrics = AdcMetrics{s, enob(s)};
    }
    result.scenario = sc;
    return result;
}

namespace {
constexpr std::array<std::string_view, 6> kSweepParameters = {"alpha", "c_eh",   "v_drop",
                                                              "r_on_s1", "n_bits", "f_s"};
}

std::span<const std::string_view> sweep_parameters() {
    return kSweepParameters;
}

Scenario with_parameter(Scenario base, std::string_view parameter, double value) {
    if (parameter == "alpha") {
        base.clock.alpha = value;
    } else if (parameter == "c_eh") {
        base.eh.c_eh = value;
    } else if (parameter == "v_drop") {
        base.eh.rectifier.v_drop = value;
    } else if (parameter == "r_on_s1" || parameter == "r_on(s1)") {
        base.adc.s1 = ConstantRSwitch{value};
        base.s1_from_settling = false;
    } else if (parameter == "n_bits") {
        if (value != std::floor(value)) {
            throw ValidationError("n_bits must be an integer", "adc.n_bits");
        }
        base.adc.n_bits = static_cast<int>(value);
    } else if (parameter == "f_s") {
        base.clock.f_s = value;
    } else {
        throw ValidationError("unknown sweep parameter '" + std::string(parameter) + "'");
    }
    return base;
}

std::vector<SweepRow> sweep(const Scenario& base, std::string_view parameter,
                            std::span<const double> values, unsigned jobs) {
    if (std::find(kSweepParameters.begin(), kSweepParameters.end(), parameter) ==
            kSweepParameters.end() &&
        parameter != "r_on(s1)") {
        throw ValidationError("unknown sweep parameter '" + std::string(parameter) + "'");
    }
    std::vector<SweepRow> rows(values.size());
    auto evaluate = [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.value = values[i];
        try {
            const auto res = run(with_parameter(base, parameter, values[i]));
            row.adc = res.adc_metrics;
            row.eh = res.eh_metrics;
        } catch (const Error& e) {
            row.error = e.what();
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            evaluate(i);
        }
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) {
                evaluate(i);
            }
        });
    }
    workers.clear();
    return rows;
}

}  // namespace esampling
