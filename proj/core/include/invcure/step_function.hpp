#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace invcure {

/// Tail function t -> G([t, inf)) of a (possibly defective) measure with
/// finitely many atoms. `total` is the value before the first jump; any part
/// of it not carried by the atoms sits at +infinity.
class StepFunction {
public:
    StepFunction() = default;

    /// Throws InvalidArgument unless times are strictly increasing, masses are
    /// nonnegative, sum(masses) <= total (up to 1e-12) and total <= 1 + 1e-12.
    StepFunction(std::vector<double> jump_times, std::vector<double> masses, double total);

    /// Measure whose total equals the sum of its atoms.
    static StepFunction from_atoms(std::vector<double> jump_times, std::vector<double> masses);

    /// G([t, inf)): includes the atom at t.
    double tail(double t) const noexcept;
    /// G((t, inf)): excludes the atom at t.
    double tail_after(double t) const noexcept;
    double mass_at(double t) const noexcept;

    double total() const noexcept { return total_; }
    /// Mass placed at +infinity.
    double mass_at_infinity() const noexcept { return residual_; }

    std::span<const double> jump_times() const noexcept { return times_; }
    std::span<const double> masses() const noexcept { return masses_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

private:
    std::vector<double> times_;
    std::vector<double> masses_;
    std::vector<double> suffix_{0.0};  // suffix_[j] = sum of masses_[j..]
    double total_ = 0.0;
    double residual_ = 0.0;
};

} // namespace invcure
