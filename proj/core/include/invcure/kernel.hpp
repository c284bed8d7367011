#pragma once

#include "invcure/dataset.hpp"
#include "invcure/step_function.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace invcure {

/// Compactly supported symmetric densities on [-1, 1].
/// `rectangular` (density 1/2 on the open interval) exists mainly so tests can
/// force exactly uniform weights.
enum class KernelFamily { epanechnikov, rectangular };

double kernel_eval(KernelFamily family, double u) noexcept;

struct KernelSpec {
    KernelSpec(double bandwidth, KernelFamily family = KernelFamily::epanechnikov);

    double bandwidth;
    KernelFamily family;
};

/// c * n^(-2/7).
double fixed_bandwidth(double c, std::size_t n);

/// Nadaraya-Watson weights K((X_i - x) / h) / sum_j K((X_j - x) / h).
/// Throws EmptyNeighborhood when every weight vanishes.
std::vector<double> kernel_weights(const SurvivalDataset& data, double x, const KernelSpec& spec);

/// The pair (H0, H1) of conditional subdistributions at one covariate value:
/// H_k([t, inf) | x) = sum_i w_i(x) 1{Y_i >= t, delta_i = k}.
struct Subdistributions {
    StepFunction censored;  ///< H0
    StepFunction events;    ///< H1

    const StepFunction& operator[](int k) const { return k == 0 ? censored : events; }
};

/// Builds (H0, H1) from arbitrary nonnegative weights (one per record). Jumps
/// sit at the distinct times carrying positive weight; tied records pool
/// their weights. Weights are used as given, not renormalized.
Subdistributions subdistributions_from_weights(const SurvivalDataset& data, std::span<const double> weights);

Subdistributions estimate_subdistributions(const SurvivalDataset& data, double x, const KernelSpec& spec);

/// H_k(. | x) for a single event class k in {0, 1}.
StepFunction estimate_subdistribution(const SurvivalDataset& data, int k, double x, const KernelSpec& spec);

} // namespace invcure
