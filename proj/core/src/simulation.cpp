#include "invcure/simulation.hpp"

#include "invcure/error.hpp"
#include "invcure/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace invcure {

Truncation parse_truncation(std::string_view name) {
    if (name == "atom") return Truncation::atom;
    if (name == "cure") return Truncation::cure;
    throw InvalidArgument("unknown truncation mode '" + std::string(name) + "' (expected atom or cure)");
}

std::string_view to_string(Truncation t) {
    return t == Truncation::atom ? "atom" : "cure";
}

std::string_view to_string(CureScenario scenario) {
    return scenario == CureScenario::cure20 ? "cure20" : "cure30";
}

CureScenario parse_scenario(std::string_view name) {
    if (name == "cure20" || name == "20") return CureScenario::cure20;
    if (name == "cure30" || name == "30") return CureScenario::cure30;
    throw InvalidArgument("unknown scenario '" + std::string(name) + "' (expected cure20 or cure30)");
}

void SimulationConfig::validate() const {
    if (!(censoring_mean > 0.0) || !std::isfinite(censoring_mean))
        throw InvalidArgument("censoring_mean must be positive");
    if (n < 2) throw InvalidArgument("simulation sample size must be >= 2");
    for (double b : beta0)
        if (!std::isfinite(b)) throw InvalidArgument("beta0 must be finite");
    for (double g : gamma)
        if (!std::isfinite(g)) throw InvalidArgument("gamma must be finite");
}

SimulationConfig standard_design(CureScenario scenario, double gamma2, std::size_t n, std::uint64_t seed) {
    SimulationConfig cfg;
    if (scenario == CureScenario::cure20) {
        cfg.beta0 = {1.75, 2.0};
        cfg.censoring_mean = 1.65;
    } else {
        cfg.beta0 = {1.1, 2.0};
        cfg.censoring_mean = 1.45;
    }
    cfg.gamma = {0.5, 0.5, gamma2};
    cfg.n = n;
    cfg.seed = seed;
    return cfg;
}

double latency_rate(const SimulationConfig& cfg, double x) {
    const auto& g = cfg.gamma;
    return std::exp(g[0] + g[1] * x + g[2] / (1.0 + 2.0 * x * x));
}

double truncation_point(const SimulationConfig& cfg) {
    constexpr int kIntervals = 128;
    constexpr double a = -1.0, b = 1.0;
    const double step = (b - a) / kIntervals;
    double sum = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
        const double x = a + i * step;
        const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += weight / latency_rate(cfg, x);
    }
    const double mean_latency = 0.5 * sum * step / 3.0;  // density of U[-1,1] is 1/2
    return -mean_latency * std::log(0.03);
}

SimulationTrace simulate_with_latents(const SimulationConfig& cfg) {
    cfg.validate();
    const double tau = truncation_point(cfg);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<Observation> records(cfg.n);
    std::vector<LatentDraw> latents(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        SplitMix64 rng(substream_seed(cfg.seed, i));
        const double x = 2.0 * rng.uniform() - 1.0;
        const double eta = cfg.beta0[0] + cfg.beta0[1] * x;
        const double phi = 1.0 / (1.0 + std::exp(-eta));
        const bool cured = !(rng.uniform() < phi);
        const double latency_draw = -std::log(rng.uniform()) / latency_rate(cfg, x);
        const double censor = -cfg.censoring_mean * std::log(rng.uniform());

        double t = inf;
        if (!cured) {
            t = latency_draw;
            if (t > tau) t = cfg.truncation == Truncation::atom ? tau : inf;
        }
        const bool event = t <= censor;
        records[i] = {event ? t : censor, event ? 1 : 0, x};
        latents[i] = {cured, t, censor};
    }
    return {SurvivalDataset(std::move(records)), std::move(latents)};
}

SurvivalDataset simulate(const SimulationConfig& cfg) {
    return simulate_with_latents(cfg).data;
}

double true_latency_quantile(double p, double x, const SimulationConfig& cfg) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
    const double q = -std::log1p(-p) / latency_rate(cfg, x);
    return std::min(q, truncation_point(cfg));
}

} // namespace invcure
