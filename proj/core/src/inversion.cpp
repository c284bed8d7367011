#include "invcure/inversion.hpp"

#include "invcure/error.hpp"

#include <algorithm>
#include <cmath>

namespace invcure {

double product_integral(const HazardMeasure& hazard, double t) noexcept {
    double s = 1.0;
    for (std::size_t j = 0; j < hazard.jump_times.size() && hazard.jump_times[j] <= t; ++j)
        s *= 1.0 - hazard.increments[j];
    return s;
}

InversionGrid::InversionGrid(const StepFunction& censored, const StepFunction& events) {
    const auto t0 = censored.jump_times();
    const auto m0 = censored.masses();
    const auto t1 = events.jump_times();
    const auto m1 = events.masses();

    const std::size_t cap = t0.size() + t1.size();
    times_.reserve(cap);
    event_mass_.reserve(cap);
    censor_mass_.reserve(cap);
    std::size_t a = 0, b = 0;
    while (a < t0.size() || b < t1.size()) {
        double t;
        if (b == t1.size() || (a < t0.size() && t0[a] < t1[b])) {
            t = t0[a];
        } else {
            t = t1[b];
        }
        times_.push_back(t);
        censor_mass_.push_back(a < t0.size() && t0[a] == t ? m0[a++] : 0.0);
        event_mass_.push_back(b < t1.size() && t1[b] == t ? m1[b++] : 0.0);
    }

    const std::size_t n = times_.size();
    at_risk_.assign(n, 0.0);
    const double residual = censored.mass_at_infinity() + events.mass_at_infinity();
    double running = 0.0;
    for (std::size_t j = n; j-- > 0;) {
        running += censor_mass_[j] + event_mass_[j];
        at_risk_[j] = running + residual;
    }

    censor_tail_.assign(n, 1.0);
    double surv = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        censor_tail_[j] = surv;
        if (censor_mass_[j] > 0.0) {
            if (!(at_risk_[j] > 0.0)) throw RiskSetZero("censoring atom with empty risk set");
            surv *= 1.0 - std::min(1.0, censor_mass_[j] / at_risk_[j]);
        }
    }
    censor_survival_end_ = surv;
}

HazardMeasure InversionGrid::censoring_hazard() const {
    HazardMeasure hz;
    for (std::size_t j = 0; j < size(); ++j) {
        if (censor_mass_[j] > 0.0) {
            hz.jump_times.push_back(times_[j]);
            hz.increments.push_back(std::min(1.0, censor_mass_[j] / at_risk_[j]));
        }
    }
    return hz;
}

double InversionGrid::censoring_survival(double t) const noexcept {
    // Index of the first grid time strictly after t.
    const auto j = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
    return j < size() ? censor_tail_[j] : censor_survival_end_;
}

LatencyHazard InversionGrid::latency_hazard(double phi, LatencyTail tail) const {
    if (!(phi > 0.0 && phi <= 1.0)) throw InvalidArgument("susceptible probability must lie in (0, 1]");
    LatencyHazard out;
    for (std::size_t j = 0; j < size(); ++j) {
        if (!(event_mass_[j] > 0.0)) continue;
        bool floored = false;
        const double inc = latency_increment(event_mass_[j], at_risk_[j], censor_tail_[j], phi, floored);
        if (floored) ++out.floor_events;
        out.hazard.jump_times.push_back(times_[j]);
        out.hazard.increments.push_back(inc);
    }
    if (tail == LatencyTail::proper && !out.hazard.increments.empty()) out.hazard.increments.back() = 1.0;
    return out;
}

double InversionGrid::model_free_plateau() const noexcept {
    double s = 1.0;
    for (std::size_t j = 0; j < size(); ++j)
        if (event_mass_[j] > 0.0) s *= 1.0 - std::min(1.0, event_mass_[j] / at_risk_[j]);
    return s;
}

bool InversionGrid::has_events() const noexcept {
    return std::any_of(event_mass_.begin(), event_mass_.end(), [](double m) { return m > 0.0; });
}

double InversionGrid::last_event_time() const {
    for (std::size_t j = size(); j-- > 0;)
        if (event_mass_[j] > 0.0) return times_[j];
    throw InvalidArgument("no event mass: latency distribution is undefined");
}

HazardMeasure censoring_hazard(const StepFunction& censored, const StepFunction& events) {
    return InversionGrid(censored, events).censoring_hazard();
}

double censoring_survival(const StepFunction& censored, const StepFunction& events, double t) {
    return InversionGrid(censored, events).censoring_survival(t);
}

double latency_survival(const StepFunction& censored, const StepFunction& events, double phi_x, double t,
                        LatencyTail tail) {
    return product_integral(InversionGrid(censored, events).latency_hazard(phi_x, tail).hazard, t);
}

StepFunction latency_distribution(const StepFunction& censored, const StepFunction& events, double phi_x,
                                  LatencyTail tail) {
    const auto hz = InversionGrid(censored, events).latency_hazard(phi_x, tail).hazard;
    std::vector<double> masses(hz.increments.size());
    double surv = 1.0;
    for (std::size_t j = 0; j < masses.size(); ++j) {
        masses[j] = surv * hz.increments[j];
        surv *= 1.0 - hz.increments[j];
    }
    return StepFunction(hz.jump_times, std::move(masses), 1.0);
}

QuantileEstimate latency_quantile(const InversionGrid& grid, double phi_x, double p, LatencyTail tail) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
    const auto hz = grid.latency_hazard(phi_x, tail).hazard;
    if (hz.jump_times.empty()) throw InvalidArgument("no event mass: latency distribution is undefined");
    double surv = 1.0;
    for (std::size_t j = 0; j < hz.jump_times.size(); ++j) {
        surv *= 1.0 - hz.increments[j];
        if (1.0 - surv >= p) return {hz.jump_times[j], false};
    }
    return {hz.jump_times.back(), true};
}

QuantileEstimate latency_quantile(const StepFunction& censored, const StepFunction& events, double phi_x, double p,
                                  LatencyTail tail) {
    return latency_quantile(InversionGrid(censored, events), phi_x, p, tail);
}

} // namespace invcure
