#pragma once

#include "esampling/frontend.hpp"
#include "esampling/signal.hpp"

#include <span>

namespace esampling {

/// Cross-coupled full-wave rectifier reduced to a conduction dead zone plus a
/// series resistance. Blocks reverse current, so the storage node never
/// discharges through it.
struct RectifierModel {
    double v_drop = 0.09284;  // volts
    double r_series = 70.0;   // ohms
};

struct EhConfig {
    double c_eh = 100e-6;  // farads
    RectifierModel rectifier;
    SwitchModel s2 = ConstantRSwitch{5.0};
    double steady_tol = 0.01;  // fraction of V_EH defining "settled"

    void validate() const;
};

struct EhMetrics {
    double v_eh = 0.0;   // volts, steady-state storage voltage
    double t_ceh = 0.0;  // seconds, time to reach (1 - tol) * v_eh
    double eta_v = 0.0;  // v_eh / V_M
    double eta_e = 0.0;  // E_h / (P_in * t_ceh)
    double e_h = 0.0;    // joules, 0.5 * c_eh * v_eh^2
};

/// max(|v_in| - v_drop, 0).
[[nodiscard]] double rectified_envelope(double v_in, const RectifierModel& rect);

struct EhStepOutcome {
    RcState state;
    double energy_delivered = 0.0;  // joules drawn from the rectified drive
    double energy_dissipated = 0.0; // joules lost in r_series + r_on(s2)
};

/// Advances the storage node over one sub-step of an EnergyHarvest segment.
/// The rectified envelope is interpolated linearly between the endpoint input
/// voltages; the node charges through r_series + r_on(s2) only while the
/// envelope exceeds it and is held otherwise. Conduction onset and cut-off
/// inside the sub-step are located exactly.
[[nodiscard]] EhStepOutcome eh_step_detailed(RcState state, double v_in_start, double v_in_end,
                                             const EhConfig& cfg, double dt);
[[nodiscard]] RcState eh_step(RcState state, double v_in_start, double v_in_end,
                              const EhConfig& cfg, double dt);

/// Pure efficiency bookkeeping: V_EH = eta_v V_M, E_h = C V^2 / 2,
/// eta_e = C V^2 / (2 P_in T_CEH).
[[nodiscard]] EhMetrics eh_metrics(double v_eh, double t_ceh, double c_eh,
                                   const InputPowerSpec& p_in, double v_m);

/// Settled metrics from a storage-voltage trace. v_eh is the final sample;
/// the run counts as settled when the voltage rose by less than tol * v_eh
/// over the trailing `settle_window` seconds. t_ceh is the first sample time
/// at or above (1 - tol) * v_eh. Throws NotConvergedError otherwise.
[[nodiscard]] EhMetrics steady_state_metrics(std::span<const double> times,
                                             std::span<const double> v_ceh,
                                             const InputPowerSpec& p_in, const EhConfig& cfg,
                                             double v_m, double tol, double settle_window);

[[nodiscard]] double harvested_energy(double v_eh, double c_eh);

/// Storage capacitance I_load * T_p / dV holding ripple to dV between refreshes.
[[nodiscard]] double size_capacitor(double i_load, double t_p, double delta_v);

/// Time for an ideal-balance boost stage to charge c_load to v_load from a
/// constant average harvested power.
[[nodiscard]] double boost_charge_time(double p_harvest_avg, double eta_converter, double c_load,
                                       double v_load);

}  // namespace esampling
