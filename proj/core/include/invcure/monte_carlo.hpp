#pragma once

#include "invcure/bandwidth.hpp"
#include "invcure/fit.hpp"
#include "invcure/simulation.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace invcure {

/// One cell of a simulation experiment.
struct McCell {
    CureScenario scenario = CureScenario::cure20;
    std::size_t n = 150;
    double gamma2 = 0.0;
    BandwidthRule rule = BandwidthRule::rate_constant(3.0);
};

struct McDesign {
    std::vector<McCell> cells;
    /// Conditional latency quantiles estimated at `quantile_x`.
    std::vector<double> quantile_levels{0.25, 0.5, 0.75};
    double quantile_x = 0.25;
    Truncation truncation = Truncation::atom;
    FitOptions fit;
};

/// Bias and MSE of one estimated quantity across replications.
struct McEstimate {
    std::string param;  ///< "beta1", "beta2", or "q0.25" style
    double truth = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double variance = 0.0;  ///< divisor = number of draws
    std::vector<double> draws;
};

McEstimate summarize_estimates(std::string param, double truth, std::vector<double> draws);

struct McCellReport {
    McCell cell;
    std::vector<McEstimate> estimates;
    std::size_t failures = 0;        ///< replicates excluded (fit error or non-convergence)
    std::size_t boundary_hits = 0;   ///< retained fits touching the parameter box
    double mean_cure_rate = 0.0;     ///< average over replicates of mean_i (1 - phi(X_i, beta_hat))
};

struct McReport {
    std::uint64_t seed = 0;
    std::size_t reps = 0;
    std::vector<McCellReport> cells;
};

/// Runs every cell for `reps` replications. Replicate r of every cell uses the
/// dataset seed substream_seed(seed, r), so cells share random numbers.
McReport run_mc(const McDesign& design, std::size_t reps, std::uint64_t seed, unsigned threads = 1);

/// Columns: n,gamma2,param,rule,bias,mse,scenario,count.
void write_mc_csv(const McReport& report, std::ostream& out);
/// Full report including replicate-level draws. `generated_at` (an ISO-8601
/// timestamp) is written only when non-empty, so reruns compare byte-equal.
void write_mc_json(const McReport& report, std::ostream& out, std::string_view generated_at = {});

struct QqPoint {
    double theoretical = 0.0;  ///< standard-normal quantile at Blom position (i - 3/8) / (m + 1/4)
    double empirical = 0.0;    ///< i-th smallest standardized draw
};

/// Throws InvalidArgument with fewer than 20 draws or zero spread.
std::vector<QqPoint> qq_data(std::span<const double> draws);
/// `coordinate` 0 is the intercept, 1 the slope.
std::vector<QqPoint> qq_data(const McReport& report, std::size_t cell, int coordinate);
double qq_correlation(std::span<const QqPoint> points);

} // namespace invcure
