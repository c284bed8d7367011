#include "invcure/kernel.hpp"

#include "invcure/error.hpp"

#include <algorithm>
#include <cmath>
#include <array>

namespace invcure {

double kernel_eval(KernelFamily family, double u) noexcept {
    switch (family) {
    case KernelFamily::epanechnikov:
        return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelFamily::rectangular:
        return std::abs(u) < 1.0 ? 0.5 : 0.0;
    }
    return 0.0;
}

KernelSpec::KernelSpec(double h, KernelFamily f) : bandwidth(h), family(f) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("bandwidth must be positive and finite");
}

double fixed_bandwidth(double c, std::size_t n) {
    if (!(c > 0.0)) throw InvalidArgument("bandwidth constant must be positive");
    if (n == 0) throw InvalidArgument("sample size must be >= 1");
    return c * std::pow(static_cast<double>(n), -2.0 / 7.0);
}

std::vector<double> kernel_weights(const SurvivalDataset& data, double x, const KernelSpec& spec) {
    std::vector<double> w(data.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        w[i] = kernel_eval(spec.family, (data[i].x - x) / spec.bandwidth);
        sum += w[i];
    }
    if (!(sum > 0.0)) throw EmptyNeighborhood(x);
    for (auto& v : w) v /= sum;
    return w;
}

Subdistributions subdistributions_from_weights(const SurvivalDataset& data, std::span<const double> weights) {
    if (weights.size() != data.size()) throw InvalidArgument("one weight per record is required");
    std::vector<std::size_t> order;
    order.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (weights[i] < 0.0) throw InvalidArgument("kernel weights must be nonnegative");
        if (weights[i] > 0.0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data[a].time < data[b].time; });

    std::array<std::vector<double>, 2> times, masses;
    for (std::size_t i : order) {
        const int k = data[i].status;
        if (!times[k].empty() && times[k].back() == data[i].time) {
            masses[k].back() += weights[i];
        } else {
            times[k].push_back(data[i].time);
            masses[k].push_back(weights[i]);
        }
    }
    return {StepFunction::from_atoms(std::move(times[0]), std::move(masses[0])),
            StepFunction::from_atoms(std::move(times[1]), std::move(masses[1]))};
}

Subdistributions estimate_subdistributions(const SurvivalDataset& data, double x, const KernelSpec& spec) {
    const auto w = kernel_weights(data, x, spec);
    return subdistributions_from_weights(data, w);
}

StepFunction estimate_subdistribution(const SurvivalDataset& data, int k, double x, const KernelSpec& spec) {
    if (k != 0 && k != 1) throw InvalidArgument("event class must be 0 or 1");
    auto pair = estimate_subdistributions(data, x, spec);
    return k == 0 ? std::move(pair.censored) : std::move(pair.events);
}

} // namespace invcure
