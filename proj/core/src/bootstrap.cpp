#include "invcure/bootstrap.hpp"

#include "invcure/error.hpp"
#include "invcure/parallel.hpp"
#include "invcure/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace invcure {

SurvivalDataset resample(const SurvivalDataset& data, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::size_t n = data.size();
    std::vector<Observation> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto pick = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
        rows.push_back(data[pick]);
    }
    return SurvivalDataset(std::move(rows));
}

std::vector<std::optional<Beta>> bootstrap_replicates(const SurvivalDataset& data, std::size_t resamples,
                                                      std::uint64_t seed, unsigned threads,
                                                      const ReplicateEstimator& estimator) {
    if (resamples < 2) throw InvalidArgument("bootstrap needs at least 2 resamples");
    std::vector<std::optional<Beta>> out(resamples);
    parallel_for(resamples, threads, [&](std::size_t b) { out[b] = estimator(resample(data, substream_seed(seed, b))); });
    return out;
}

double sample_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BootstrapResult summarize_bootstrap(std::span<const std::optional<Beta>> replicates, double level) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("confidence level must lie in (0, 1)");
    BootstrapResult result;
    result.level = level;
    for (const auto& r : replicates) {
        if (r) result.replicates.push_back(*r);
        else ++result.failures;
    }
    if (result.failures * 2 > replicates.size())
        throw BootstrapUnstable(std::to_string(result.failures) + " of " + std::to_string(replicates.size()) +
                                " bootstrap refits failed");
    const std::size_t m = result.replicates.size();
    if (m < 2) throw BootstrapUnstable("fewer than two successful bootstrap refits");

    // Shifted two-pass covariance: exact zero for identical replicates.
    const Beta shift = result.replicates.front();
    Beta mean = Beta::Zero();
    for (const auto& r : result.replicates) mean += r - shift;
    mean /= static_cast<double>(m);
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& r : result.replicates) {
        const Beta d = (r - shift) - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(m - 1);
    cov(0, 1) = cov(1, 0) = 0.5 * (cov(0, 1) + cov(1, 0));
    result.variance = cov;

    const double alpha = 1.0 - level;
    for (int k = 0; k < 2; ++k) {
        std::vector<double> coord;
        coord.reserve(m);
        for (const auto& r : result.replicates) coord.push_back(r[k]);
        result.ci[k] = {sample_quantile(coord, alpha / 2.0), sample_quantile(coord, 1.0 - alpha / 2.0)};
    }
    return result;
}

BootstrapResult bootstrap(const SurvivalDataset& data, const BandwidthRule& rule, const CureLink& link,
                          const BootstrapOptions& options) {
    std::optional<double> frozen;
    if (options.freeze_bandwidth) frozen = rule.resolve(data);

    const ReplicateEstimator estimator = [&](const SurvivalDataset& sample) -> std::optional<Beta> {
        try {
            const KernelSpec spec(frozen ? *frozen : rule.resolve(sample));
            const auto result = fit(LikelihoodModel(sample, spec, link), options.fit);
            if (!result.converged) return std::nullopt;
            return result.beta_hat;
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    const auto replicates = bootstrap_replicates(data, options.resamples, options.seed, options.threads, estimator);
    return summarize_bootstrap(replicates, options.level);
}

} // namespace invcure
