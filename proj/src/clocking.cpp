#include "esampling/clocking.hpp"

#include "esampling/errors.hpp"

#include <cmath>

namespace esampling {

const char* to_string(PhaseKind kind) noexcept {
    return kind == PhaseKind::Acquisition ? "aq" : "eh";
}

void ClockPlan::validate() const {
    if (!(f_s > 0.0) || !std::isfinite(f_s)) {
        throw ValidationError("clock.f_s_hz must be positive", "clock.f_s_hz");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("clock.alpha must lie in (0, 1)", "clock.alpha");
    }
    if (n_periods < 1) {
        throw ValidationError("clock.n_periods must be >= 1", "clock.n_periods");
    }
}

PhaseSegment ClockPlan::acquisition_segment(std::uint64_t k) const noexcept {
    return {period_start(k), acquisition_end(k), PhaseKind::Acquisition, k};
}

PhaseSegment ClockPlan::harvest_segment(std::uint64_t k) const noexcept {
    return {acquisition_end(k), period_start(k + 1), PhaseKind::EnergyHarvest, k};
}

std::vector<PhaseSegment> segments(const ClockPlan& plan) {
    plan.validate();
    std::vector<PhaseSegment> out;
    out.reserve(2 * plan.n_periods);
    for (std::uint64_t k = 0; k < plan.n_periods; ++k) {
        out.push_back(plan.acquisition_segment(k));
        out.push_back(plan.harvest_segment(k));
    }
    return out;
}

PhaseSegment phase_at(const ClockPlan& plan, double t) {
    plan.validate();
    if (!(t >= 0.0) || !(t < plan.duration())) {
        throw ValidationError("time outside the clock plan");
    }
    auto k = static_cast<std::uint64_t>(std::floor(t * plan.f_s));
    // floor() can land one period off near boundaries; correct against exact starts.
    while (k > 0 && t < plan.period_start(k)) {
        --k;
    }
    while (k + 1 < plan.n_periods && t >= plan.period_start(k + 1)) {
        ++k;
    }
    return t < plan.acquisition_end(k) ? plan.acquisition_segment(k) : plan.harvest_segment(k);
}

}  // namespace esampling
