#include "esampling/frontend.hpp"

#include "esampling/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace esampling {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate(const SwitchModel& model, const char* key_prefix) {
    const std::string prefix = key_prefix;
    std::visit(Overloaded{
                   [](const IdealSwitch&) {},
                   [&](const ConstantRSwitch& s) {
                       if (!(s.r_on > 0.0) || !std::isfinite(s.r_on)) {
                           throw ValidationError(prefix + ".r_on must be positive",
                                                 prefix + ".r_on");
                       }
                   },
                   [&](const PassTransistorSwitch& s) {
                       if (!(s.k_gain > 0.0)) {
                           throw ValidationError(prefix + ".k_gain must be positive",
                                                 prefix + ".k_gain");
                       }
                       if (!(s.v_th >= 0.0)) {
                           throw ValidationError(prefix + ".v_th must be >= 0", prefix + ".v_th");
                       }
                   },
               },
               model);
}

double r_on(const SwitchModel& model, double v_signal) {
    return std::visit(Overloaded{
                          [](const IdealSwitch&) { return kIdealSwitchResistance; },
                          [](const ConstantRSwitch& s) { return s.r_on; },
                          [v_signal](const PassTransistorSwitch& s) {
                              const double overdrive = std::abs(s.v_gate - v_signal) - s.v_th;
                              if (!(overdrive > 0.0)) {
                                  throw CutoffError("pass transistor in cutoff: |V_GS| <= V_TH");
                              }
                              return 1.0 / (s.k_gain * overdrive);
                          },
                      },
                      model);
}

double worst_case_r_on(const SwitchModel& model, double v_lo, double v_hi) {
    if (const auto* pt = std::get_if<PassTransistorSwitch>(&model)) {
        // |v_gate - v| is smallest at the point of [v_lo, v_hi] nearest the gate.
        const double nearest = std::clamp(pt->v_gate, v_lo, v_hi);
        return r_on(model, nearest);
    }
    return r_on(model, v_lo);
}

RcState rc_step_linear(RcState state, double v_drive_start, double v_drive_end, double r,
                       double c, double dt) {
    // v(dt) = u_end - s*tau + (v0 - u0 + s*tau) e^{-dt/tau}, rearranged around
    // m = 1 - e^{-dt/tau} to avoid cancelling large s*tau terms when tau >> dt.
    const double x = dt / (r * c);
    const double m = -std::expm1(-x);
    const double ramp_gain = 1.0 - m / x;
    const double v0 = state.v_cap;
    state.v_cap = v0 + (v_drive_start - v0) * m + (v_drive_end - v_drive_start) * ramp_gain;
    state.t += dt;
    return state;
}

double settling_error(double r, double c, double t_aq) {
    return std::exp(-t_aq / (r * c));
}

double default_settling_factor(int n_bits) {
    return static_cast<double>(n_bits + 1) * std::numbers::ln2;
}

}  // namespace esampling
