#pragma once

#include "invcure/dataset.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace invcure {

/// What happens to latent lifetimes drawn beyond the truncation point tau.
///  - atom: T is set to tau (all latency mass stays finite; phi(x, beta0) is
///    the true susceptible probability).
///  - cure: T is set to +infinity (the tail mass joins the cured group).
enum class Truncation { atom, cure };

Truncation parse_truncation(std::string_view name);
std::string_view to_string(Truncation t);

/// Data-generating design: X ~ U[-1, 1]; susceptible with logistic
/// probability phi(x, beta0); latency exponential with rate
/// lambda(x) = exp(g0 + g1 x + g2 / (1 + 2 x^2)) truncated at tau; censoring
/// exponential with mean `censoring_mean`, independent of X.
struct SimulationConfig {
    std::array<double, 2> beta0{1.75, 2.0};
    std::array<double, 3> gamma{0.5, 0.5, 0.0};
    double censoring_mean = 1.65;
    std::size_t n = 150;
    std::uint64_t seed = 0;
    Truncation truncation = Truncation::atom;

    void validate() const;
};

/// The two incidence scenarios of the reference design: about 20% cured
/// with 40% censoring, and about 30% cured with 50% censoring (gamma2 = 0).
enum class CureScenario { cure20, cure30 };

/// Accepts "cure20"/"20" and "cure30"/"30".
CureScenario parse_scenario(std::string_view name);
std::string_view to_string(CureScenario scenario);

SimulationConfig standard_design(CureScenario scenario, double gamma2, std::size_t n, std::uint64_t seed);

double latency_rate(const SimulationConfig& cfg, double x);

/// 0.97 quantile of an exponential law whose mean is E[1 / lambda(X)],
/// X ~ U[-1, 1], the expectation taken by 129-point composite Simpson.
double truncation_point(const SimulationConfig& cfg);

/// Latent quantities behind one simulated record.
struct LatentDraw {
    bool cured = false;
    double event_time = 0.0;  ///< +inf when no event ever occurs
    double censor_time = 0.0;
};

struct SimulationTrace {
    SurvivalDataset data;
    std::vector<LatentDraw> latents;
};

SurvivalDataset simulate(const SimulationConfig& cfg);

/// Same draws as simulate(), plus the latent lifetimes.
SimulationTrace simulate_with_latents(const SimulationConfig& cfg);

/// -log(1 - p) / lambda(x), capped at tau.
double true_latency_quantile(double p, double x, const SimulationConfig& cfg);

} // namespace invcure
