#pragma once

#include "invcure/step_function.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace invcure {

/// Hazard denominators below this value are clamped to it.
inline constexpr double kDenominatorFloor = 1e-10;

/// Discrete cumulative hazard: increments dL(s) in [0, 1] at jump times.
struct HazardMeasure {
    std::vector<double> jump_times;
    std::vector<double> increments;
};

/// prod_{s <= t} (1 - dL(s)).
double product_integral(const HazardMeasure& hazard, double t) noexcept;

/// Increment of the susceptible-latency hazard at one event time:
///   a / (R - (1 - phi) * G),
/// with a = H1({s}), R = H([s, inf)), G = F_C([s, inf)). A denominator below
/// kDenominatorFloor is clamped (and `floored` set); the result is capped at 1.
inline double latency_increment(double event_mass, double at_risk, double censor_tail, double phi,
                                bool& floored) noexcept {
    double denom = at_risk - (1.0 - phi) * censor_tail;
    floored = denom < kDenominatorFloor;
    if (floored) denom = kDenominatorFloor;
    const double inc = event_mass / denom;
    return inc < 1.0 ? inc : 1.0;
}

/// What the latency estimate does with the mass its product-integral leaves
/// after the last event atom tau(x).
///  - defective: the leftover stays at +infinity (the raw product-integral;
///    with phi = 1 this is the conditional Kaplan-Meier curve).
///  - proper: the hazard at tau(x) is set to 1, so the susceptible lifetime
///    lives on (-inf, tau(x)]: beyond the last event nobody is still
///    susceptible, matching P(T > tau_H1(x) | x) = P(T = inf | x).
enum class LatencyTail { defective, proper };

struct LatencyHazard {
    HazardMeasure hazard;
    std::size_t floor_events = 0;  ///< denominators clamped at kDenominatorFloor
};

/// The merged jump grid of a subdistribution pair (H0, H1) at one covariate
/// value, with the quantities every inversion needs precomputed.
///
/// At a time carrying both event and censoring mass, events are processed
/// first: the censoring tail G_j = F_C([t_j, inf)) is the left limit and
/// still contains the censoring atom at t_j, and the censoring hazard at t_j
/// keeps the tied event mass in its risk set.
class InversionGrid {
public:
    /// Throws RiskSetZero if a censoring atom meets an empty risk set.
    InversionGrid(const StepFunction& censored, const StepFunction& events);

    std::size_t size() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> event_mass() const noexcept { return event_mass_; }
    std::span<const double> censor_mass() const noexcept { return censor_mass_; }
    /// H([t_j, inf)).
    std::span<const double> at_risk() const noexcept { return at_risk_; }
    /// F_C([t_j, inf)).
    std::span<const double> censor_tail() const noexcept { return censor_tail_; }

    HazardMeasure censoring_hazard() const;
    /// F_C((t, inf)).
    double censoring_survival(double t) const noexcept;

    LatencyHazard latency_hazard(double phi, LatencyTail tail = LatencyTail::defective) const;

    /// prod over all event atoms of (1 - H1({s}) / H([s, inf))): the
    /// model-free estimate of P(T = inf | x).
    double model_free_plateau() const noexcept;

    /// Largest time with positive event mass; the latency horizon.
    double last_event_time() const;
    bool has_events() const noexcept;

private:
    std::vector<double> times_;
    std::vector<double> event_mass_;
    std::vector<double> censor_mass_;
    std::vector<double> at_risk_;
    std::vector<double> censor_tail_;
    double censor_survival_end_ = 1.0;
};

HazardMeasure censoring_hazard(const StepFunction& censored, const StepFunction& events);

/// F_C((t, inf) | x) from (H0, H1).
double censoring_survival(const StepFunction& censored, const StepFunction& events, double t);

/// F_{T,0}((t, inf) | x) for a susceptible probability phi_x in (0, 1].
/// Constant beyond the last event atom.
double latency_survival(const StepFunction& censored, const StepFunction& events, double phi_x, double t,
                        LatencyTail tail = LatencyTail::defective);

/// The latency law as a step function: atoms at event times, total 1, and
/// whatever the atoms do not carry sitting at +infinity.
StepFunction latency_distribution(const StepFunction& censored, const StepFunction& events, double phi_x,
                                  LatencyTail tail = LatencyTail::defective);

struct QuantileEstimate {
    double time = 0.0;
    bool defective = false;  ///< the estimated law never reaches the level
};

/// Smallest event time t with 1 - F_{T,0}((t, inf) | x) >= p. When the law
/// stays below p, returns the last event time with `defective` set (never
/// the case under LatencyTail::proper, which gives the same time).
QuantileEstimate latency_quantile(const StepFunction& censored, const StepFunction& events, double phi_x, double p,
                                  LatencyTail tail = LatencyTail::defective);
QuantileEstimate latency_quantile(const InversionGrid& grid, double phi_x, double p,
                                  LatencyTail tail = LatencyTail::defective);

} // namespace invcure
