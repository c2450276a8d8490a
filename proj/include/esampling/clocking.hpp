#pragma once

#include <cstdint>
#include <vector>

namespace esampling {

enum class PhaseKind { Acquisition, EnergyHarvest };

[[nodiscard]] const char* to_string(PhaseKind kind) noexcept;

struct PhaseSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    PhaseKind kind = PhaseKind::Acquisition;
    std::uint64_t period_index = 0;

    [[nodiscard]] double duration() const noexcept { return t_end - t_start; }
};

/// Two-phase sampling clock: each period T_s = 1/f_s opens with an acquisition
/// interval alpha*T_s (S1 closed) followed by the harvesting interval
/// (1 - alpha)*T_s (S2 closed). Switching is break-before-make.
struct ClockPlan {
    double f_s = 10e3;
    double alpha = 0.1;
    std::uint64_t n_periods = 1;

    void validate() const;

    [[nodiscard]] double t_s() const noexcept { return 1.0 / f_s; }
    [[nodiscard]] double t_aq() const noexcept { return alpha * t_s(); }
    [[nodiscard]] double t_eh() const noexcept { return t_s() - t_aq(); }
    [[nodiscard]] double duration() const noexcept { return period_start(n_periods); }

    /// k * T_s, computed from the integer index (never accumulated).
    [[nodiscard]] double period_start(std::uint64_t k) const noexcept {
        return static_cast<double>(k) / f_s;
    }
    [[nodiscard]] double acquisition_end(std::uint64_t k) const noexcept {
        return period_start(k) + t_aq();
    }

    [[nodiscard]] PhaseSegment acquisition_segment(std::uint64_t k) const noexcept;
    [[nodiscard]] PhaseSegment harvest_segment(std::uint64_t k) const noexcept;
};

/// All 2*n_periods segments in time order.
[[nodiscard]] std::vector<PhaseSegment> segments(const ClockPlan& plan);

/// The segment containing t; boundary instants belong to the segment they open.
/// Throws ValidationError for t outside [0, n_periods*T_s).
[[nodiscard]] PhaseSegment phase_at(const ClockPlan& plan, double t);

}  // namespace esampling
