#pragma once

#include "invcure/bandwidth.hpp"
#include "invcure/dataset.hpp"
#include "invcure/fit.hpp"
#include "invcure/link.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace invcure {

struct BootstrapOptions {
    std::size_t resamples = 250;
    std::uint64_t seed = 0;
    double level = 0.95;  ///< percentile-interval coverage
    /// Reuse the bandwidth chosen on the original sample instead of
    /// re-running the rule (only matters for cross-validation).
    bool freeze_bandwidth = false;
    unsigned threads = 1;
    FitOptions fit;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

struct BootstrapResult {
    std::vector<Beta> replicates;  ///< converged resamples, in resample order
    Eigen::Matrix2d variance = Eigen::Matrix2d::Zero();
    std::array<Interval, 2> ci{};
    double level = 0.95;
    std::size_t failures = 0;
};

/// Draws n rows with replacement. Resample `b` of a run seeded with `seed`
/// uses resample(data, substream_seed(seed, b)).
SurvivalDataset resample(const SurvivalDataset& data, std::uint64_t seed);

/// An estimator returning nullopt when it fails on a resample.
using ReplicateEstimator = std::function<std::optional<Beta>(const SurvivalDataset&)>;

std::vector<std::optional<Beta>> bootstrap_replicates(const SurvivalDataset& data, std::size_t resamples,
                                                      std::uint64_t seed, unsigned threads,
                                                      const ReplicateEstimator& estimator);

/// Sample covariance and percentile intervals of the successful replicates.
/// Throws BootstrapUnstable when more than half of them failed.
BootstrapResult summarize_bootstrap(std::span<const std::optional<Beta>> replicates, double level);

/// Naive bootstrap of the full estimator: every resample is refitted with the
/// whole pipeline (bandwidth rule, both initialization stages, Nelder-Mead).
/// Non-converged or failed refits are counted, not imputed.
BootstrapResult bootstrap(const SurvivalDataset& data, const BandwidthRule& rule, const CureLink& link,
                          const BootstrapOptions& options);

/// Type-7 (linear interpolation) sample quantile of unsorted values.
double sample_quantile(std::vector<double> values, double p);

} // namespace invcure
