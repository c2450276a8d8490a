#pragma once

#include <variant>

namespace esampling {

/// Floor resistance used for an ideal (r_on -> 0) switch.
inline constexpr double kIdealSwitchResistance = 1e-6;

struct IdealSwitch {};

/// Bootstrapped switch abstraction: on-resistance independent of the signal.
struct ConstantRSwitch {
    double r_on = 1.0;  // ohms
};

/// Pass transistor in triode: R_ON = 1 / (k_gain * (|v_gate - v_signal| - v_th)),
/// k_gain = mu * C_ox * W / L.
struct PassTransistorSwitch {
    double k_gain = 1e-3;  // A/V^2
    double v_th = 0.4;     // volts
    double v_gate = 0.0;   // volts
};

using SwitchModel = std::variant<IdealSwitch, ConstantRSwitch, PassTransistorSwitch>;

/// Throws ValidationError naming `key_prefix` when the model's parameters are invalid.
void validate(const SwitchModel& model, const char* key_prefix);

/// On-resistance at the given signal voltage. Throws CutoffError when a pass
/// transistor's |V_GS| <= V_TH.
[[nodiscard]] double r_on(const SwitchModel& model, double v_signal);

/// Largest on-resistance over v in [v_lo, v_hi]. Throws CutoffError if the
/// switch cuts off anywhere in the interval.
[[nodiscard]] double worst_case_r_on(const SwitchModel& model, double v_lo, double v_hi);

/// Voltage of a capacitor node at time t.
struct RcState {
    double v_cap = 0.0;
    double t = 0.0;
};

/// Exact solution of C dv/dt = (u(t) - v) / R over [t, t + dt] with u linear
/// from `v_drive_start` to `v_drive_end`.
[[nodiscard]] RcState rc_step_linear(RcState state, double v_drive_start, double v_drive_end,
                                     double r, double c, double dt);

/// Residual fraction exp(-t_aq / (r*c)) of a step left after tracking for t_aq.
[[nodiscard]] double settling_error(double r, double c, double t_aq);

/// Settling factor k = (n+1) ln 2 that leaves less than half an LSB of a
/// full-scale step after k time constants.
[[nodiscard]] double default_settling_factor(int n_bits);

}  // namespace esampling
