#pragma once

#include "invcure/dataset.hpp"
#include "invcure/kernel.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace invcure {

/// 20 log-spaced candidates spanning [0.5, 4] * n^(-2/7).
std::vector<double> default_cv_grid(std::size_t n);

/// Leave-one-out least-squares criterion for H_k:
///   CV_k(h) = n^-1 sum_i n^-1 sum_j [1{Y_i >= Y_j, delta_i = k} - H_k^(-i)([Y_j, inf) | X_i)]^2,
/// i.e. the squared error integrated against the empirical law of Y.
/// Returns +inf when some leave-one-out neighborhood is empty.
double cv_criterion(const SurvivalDataset& data, int k, double h,
                    KernelFamily family = KernelFamily::epanechnikov);

struct CvSelection {
    double censored_bandwidth = 0.0;  ///< argmin of CV_0
    double event_bandwidth = 0.0;     ///< argmin of CV_1
    double bandwidth = 0.0;           ///< their average
    std::vector<double> grid;
    std::vector<double> censored_scores;
    std::vector<double> event_scores;
};

/// Minimizes CV_0 and CV_1 separately over `grid` (ties go to the earliest
/// candidate) and averages the two minimizers. Throws NoFeasibleBandwidth if
/// every candidate is infeasible for either class.
CvSelection cv_select(const SurvivalDataset& data, std::span<const double> grid,
                      KernelFamily family = KernelFamily::epanechnikov);

double cv_bandwidth(const SurvivalDataset& data, std::span<const double> grid);

/// How a bandwidth is chosen for a given sample.
class BandwidthRule {
public:
    enum class Kind { rate_constant, fixed, cross_validated };

    /// h = c * n^(-2/7).
    static BandwidthRule rate_constant(double c);
    static BandwidthRule fixed(double h);
    /// Empty grid means default_cv_grid(n).
    static BandwidthRule cross_validated(std::vector<double> grid = {});

    double resolve(const SurvivalDataset& data) const;

    Kind kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }
    /// "c=3", "h=0.5" or "cv".
    std::string label() const;

private:
    BandwidthRule(Kind kind, double value, std::vector<double> grid)
        : kind_(kind), value_(value), grid_(std::move(grid)) {}

    Kind kind_;
    double value_;
    std::vector<double> grid_;
};

} // namespace invcure
