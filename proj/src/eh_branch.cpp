#include "esampling/eh_branch.hpp"

#include "esampling/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace esampling {

namespace {

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
    0.2369268850561891};

// Joule loss over a conduction interval of length h where the drive-minus-node
// voltage evolves as d(t) = s*tau + (d0 - s*tau) e^{-t/tau}.
double conduction_loss(double d0, double slope, double tau, double r, double h) {
    const double lag = slope * tau;
    double acc = 0.0;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
        const double t = 0.5 * h * (kGaussNodes[i] + 1.0);
        const double d = lag + (d0 - lag) * std::exp(-t / tau);
        acc += kGaussWeights[i] * d * d;
    }
    return 0.5 * h * acc / r;
}

}  // namespace

void EhConfig::validate() const {
    if (!(c_eh > 0.0)) {
        throw ValidationError("eh.c_eh_f must be positive", "eh.c_eh_f");
    }
    if (!(rectifier.v_drop >= 0.0)) {
        throw ValidationError("eh.v_drop_v must be >= 0", "eh.v_drop_v");
    }
    if (!(rectifier.r_series > 0.0)) {
        throw ValidationError("eh.r_series_ohm must be positive", "eh.r_series_ohm");
    }
    if (!(steady_tol > 0.0 && steady_tol < 1.0)) {
        throw ValidationError("eh.steady_tol must lie in (0, 1)", "eh.steady_tol");
    }
    esampling::validate(s2, "switch.s2");
}

double rectified_envelope(double v_in, const RectifierModel& rect) {
    return std::max(std::abs(v_in) - rect.v_drop, 0.0);
}

EhStepOutcome eh_step_detailed(RcState state, double v_in_start, double v_in_end,
                               const EhConfig& cfg, double dt) {
    EhStepOutcome out{state, 0.0, 0.0};
    out.state.t = state.t + dt;

    double r_switch = 0.0;
    try {
        r_switch = r_on(cfg.s2, 0.5 * (v_in_start + v_in_end));
    } catch (const CutoffError&) {
        return out;  // S2 open: branch disconnected for this sub-step
    }
    const double r = cfg.rectifier.r_series + r_switch;
    const double c = cfg.c_eh;
    const double tau = r * c;

    const double u0 = rectified_envelope(v_in_start, cfg.rectifier);
    const double u1 = rectified_envelope(v_in_end, cfg.rectifier);
    const double slope = (u1 - u0) / dt;
    const double v0 = state.v_cap;

    double onset = 0.0;
    double d0 = u0 - v0;
    if (d0 <= 0.0) {
        if (slope <= 0.0) {
            return out;
        }
        onset = -d0 / slope;
        if (onset >= dt) {
            return out;
        }
        d0 = 0.0;
    }

    double span = dt - onset;
    double v1 = 0.0;
    bool blocked_early = false;
    if (slope < 0.0 && d0 > 0.0) {
        // Envelope falls below the node at t_off; the rectifier blocks afterwards.
        const double t_off = tau * std::log1p(d0 / (-slope * tau));
        if (t_off < span) {
            span = t_off;
            v1 = u0 + slope * (onset + t_off);
            blocked_early = true;
        }
    }
    if (!blocked_early) {
        v1 = rc_step_linear({v0, 0.0}, u0 + slope * onset, u1, r, c, span).v_cap;
    }
    v1 = std::max(v1, v0);

    out.state.v_cap = v1;
    out.energy_dissipated = conduction_loss(d0, slope, tau, r, span);
    out.energy_delivered = 0.5 * c * (v1 * v1 - v0 * v0) + out.energy_dissipated;
    return out;
}

RcState eh_step(RcState state, double v_in_start, double v_in_end, const EhConfig& cfg,
                double dt) {
    return eh_step_detailed(state, v_in_start, v_in_end, cfg, dt).state;
}

EhMetrics eh_metrics(double v_eh, double t_ceh, double c_eh, const InputPowerSpec& p_in,
                     double v_m) {
    if (!(v_m > 0.0) || !(p_in.p_in_rms > 0.0) || !(t_ceh > 0.0) || !(c_eh > 0.0)) {
        throw ValidationError("eh metrics need positive V_M, P_in, T_CEH and C_EH");
    }
    EhMetrics m;
    m.v_eh = v_eh;
    m.t_ceh = t_ceh;
    m.eta_v = v_eh / v_m;
    m.e_h = harvested_energy(v_eh, c_eh);
    m.eta_e = (c_eh * v_eh * v_eh) / (2.0 * p_in.p_in_rms * t_ceh);
    return m;
}

EhMetrics steady_state_metrics(std::span<const double> times, std::span<const double> v_ceh,
                               const InputPowerSpec& p_in, const EhConfig& cfg, double v_m,
                               double tol, double settle_window) {
    if (times.size() != v_ceh.size() || times.size() < 2) {
        throw ValidationError("steady_state_metrics needs matching, non-trivial traces");
    }
    const double v_final = v_ceh.back();
    if (!(v_final > 0.0)) {
        throw NotConvergedError("storage capacitor never charged (envelope inside dead zone?)");
    }
    const double t_end = times.back();
    if (!(t_end - times.front() >= settle_window)) {
        throw NotConvergedError("trace shorter than the settling window");
    }
    // Last sample at or before t_end - settle_window.
    const auto it = std::upper_bound(times.begin(), times.end(), t_end - settle_window);
    const auto ref = static_cast<std::size_t>(std::distance(times.begin(), it)) - 1;
    const double rise = v_final - v_ceh[ref];
    if (rise > tol * v_final) {
        throw NotConvergedError("storage voltage still rising: " + std::to_string(rise) +
                                " V over the last settling window (limit " +
                                std::to_string(tol * v_final) + " V)");
    }
    const double threshold = (1.0 - tol) * v_final;
    std::size_t hit = v_ceh.size() - 1;
    for (std::size_t i = 0; i < v_ceh.size(); ++i) {
        if (v_ceh[i] >= threshold) {
            hit = i;
            break;
        }
    }
    return eh_metrics(v_final, times[hit], cfg.c_eh, p_in, v_m);
}

double harvested_energy(double v_eh, double c_eh) {
    return 0.5 * c_eh * v_eh * v_eh;
}

double size_capacitor(double i_load, double t_p, double delta_v) {
    if (!(delta_v > 0.0)) {
        throw ValidationError("ripple delta_v must be positive");
    }
    if (!(i_load >= 0.0) || !(t_p > 0.0)) {
        throw ValidationError("load current must be >= 0 and ripple period positive");
    }
    return i_load * t_p / delta_v;
}

double boost_charge_time(double p_harvest_avg, double eta_converter, double c_load,
                         double v_load) {
    if (!(p_harvest_avg > 0.0) || !(c_load > 0.0) || !(v_load > 0.0)) {
        throw ValidationError("boost stage needs positive power, load capacitance and voltage");
    }
    if (!(eta_converter > 0.0 && eta_converter <= 1.0)) {
        throw ValidationError("converter efficiency must lie in (0, 1]");
    }
    const double stored = 0.5 * c_load * v_load * v_load;
    return stored / (eta_converter * p_harvest_avg);
}

}  // namespace esampling
