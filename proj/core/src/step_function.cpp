#include "invcure/step_function.hpp"

#include "invcure/error.hpp"

#include <algorithm>
#include <cmath>

namespace invcure {

StepFunction::StepFunction(std::vector<double> jump_times, std::vector<double> masses, double total)
    : times_(std::move(jump_times)), masses_(std::move(masses)), total_(total) {
    if (times_.size() != masses_.size()) throw InvalidArgument("StepFunction: times and masses differ in length");
    for (std::size_t j = 0; j < times_.size(); ++j) {
        if (!std::isfinite(times_[j])) throw InvalidArgument("StepFunction: jump times must be finite");
        if (j > 0 && !(times_[j] > times_[j - 1]))
            throw InvalidArgument("StepFunction: jump times must be strictly increasing");
        if (!(masses_[j] >= 0.0)) throw InvalidArgument("StepFunction: masses must be nonnegative");
    }
    suffix_.assign(times_.size() + 1, 0.0);
    for (std::size_t j = times_.size(); j-- > 0;) suffix_[j] = suffix_[j + 1] + masses_[j];
    const double carried = suffix_.empty() ? 0.0 : suffix_[0];
    if (carried > total_ + 1e-12) throw InvalidArgument("StepFunction: atoms exceed total mass");
    if (total_ > 1.0 + 1e-12) throw InvalidArgument("StepFunction: total mass exceeds 1");
    residual_ = std::max(0.0, total_ - carried);
}

StepFunction StepFunction::from_atoms(std::vector<double> jump_times, std::vector<double> masses) {
    double sum = 0.0;
    for (std::size_t j = masses.size(); j-- > 0;) sum += masses[j];
    StepFunction f(std::move(jump_times), std::move(masses), sum);
    f.residual_ = 0.0;
    f.total_ = f.suffix_[0];
    return f;
}

double StepFunction::tail(double t) const noexcept {
    const auto idx = static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
    return residual_ + suffix_[idx];
}

double StepFunction::tail_after(double t) const noexcept {
    const auto idx = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
    return residual_ + suffix_[idx];
}

double StepFunction::mass_at(double t) const noexcept {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.end() || *it != t) return 0.0;
    return masses_[static_cast<std::size_t>(it - times_.begin())];
}

} // namespace invcure
