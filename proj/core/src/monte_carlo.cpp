#include "invcure/monte_carlo.hpp"

#include "invcure/error.hpp"
#include "invcure/inversion.hpp"
#include "invcure/kernel.hpp"
#include "invcure/parallel.hpp"
#include "invcure/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

namespace invcure {

McEstimate summarize_estimates(std::string param, double truth, std::vector<double> draws) {
    McEstimate e;
    e.param = std::move(param);
    e.truth = truth;
    e.draws = std::move(draws);
    if (e.draws.empty()) return e;
    const double m = static_cast<double>(e.draws.size());
    double mean = 0.0, sq = 0.0;
    for (double d : e.draws) {
        mean += d;
        sq += (d - truth) * (d - truth);
    }
    mean /= m;
    double var = 0.0;
    for (double d : e.draws) var += (d - mean) * (d - mean);
    e.bias = mean - truth;
    e.mse = sq / m;
    e.variance = var / m;
    return e;
}

namespace {

struct ReplicateOutcome {
    Beta beta;
    std::vector<double> quantiles;
    double cure_rate = 0.0;
    bool at_boundary = false;
};

std::optional<ReplicateOutcome> run_replicate(const McDesign& design, const McCell& cell, std::uint64_t seed) {
    auto cfg = standard_design(cell.scenario, cell.gamma2, cell.n, seed);
    cfg.truncation = design.truncation;
    const auto data = simulate(cfg);
    try {
        const KernelSpec spec(cell.rule.resolve(data));
        const CureLink link = CureLink::logistic();
        FitOptions fit_options = design.fit;
        fit_options.seed = seed;
        const auto fitted = fit(LikelihoodModel(data, spec, link), fit_options);
        if (!fitted.converged) return std::nullopt;

        ReplicateOutcome out;
        out.beta = fitted.beta_hat;
        out.at_boundary = fitted.at_boundary;
        double cure = 0.0;
        for (const auto& r : data) cure += link.cure_probability(r.x, fitted.beta_hat);
        out.cure_rate = cure / static_cast<double>(data.size());

        if (!design.quantile_levels.empty()) {
            const auto sub = estimate_subdistributions(data, design.quantile_x, spec);
            const InversionGrid grid(sub.censored, sub.events);
            const double phi = link.phi(design.quantile_x, fitted.beta_hat);
            for (double p : design.quantile_levels) out.quantiles.push_back(latency_quantile(grid, phi, p, LatencyTail::proper).time);
        }
        return out;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::string quantile_name(double p) {
    return "q" + format_number(p);
}

} // namespace

McReport run_mc(const McDesign& design, std::size_t reps, std::uint64_t seed, unsigned threads) {
    if (reps < 1) throw InvalidArgument("at least one replication is required");
    McReport report;
    report.seed = seed;
    report.reps = reps;

    for (const auto& cell : design.cells) {
        std::vector<std::optional<ReplicateOutcome>> outcomes(reps);
        parallel_for(reps, threads, [&](std::size_t r) { outcomes[r] = run_replicate(design, cell, substream_seed(seed, r)); });

        McCellReport cr;
        cr.cell = cell;
        std::vector<double> b1, b2;
        std::vector<std::vector<double>> q(design.quantile_levels.size());
        double cure_sum = 0.0;
        for (const auto& o : outcomes) {
            if (!o) {
                ++cr.failures;
                continue;
            }
            b1.push_back(o->beta[0]);
            b2.push_back(o->beta[1]);
            for (std::size_t k = 0; k < q.size(); ++k) q[k].push_back(o->quantiles[k]);
            cure_sum += o->cure_rate;
            cr.boundary_hits += o->at_boundary;
        }
        if (!b1.empty()) cr.mean_cure_rate = cure_sum / static_cast<double>(b1.size());

        auto truth_cfg = standard_design(cell.scenario, cell.gamma2, cell.n, seed);
        truth_cfg.truncation = design.truncation;
        cr.estimates.push_back(summarize_estimates("beta1", truth_cfg.beta0[0], std::move(b1)));
        cr.estimates.push_back(summarize_estimates("beta2", truth_cfg.beta0[1], std::move(b2)));
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double p = design.quantile_levels[k];
            cr.estimates.push_back(summarize_estimates(quantile_name(p),
                                                       true_latency_quantile(p, design.quantile_x, truth_cfg),
                                                       std::move(q[k])));
        }
        report.cells.push_back(std::move(cr));
    }
    return report;
}

void write_mc_csv(const McReport& report, std::ostream& out) {
    out << "n,gamma2,param,rule,bias,mse,scenario,count\n";
    for (const auto& c : report.cells) {
        for (const auto& e : c.estimates) {
            out << c.cell.n << ',' << format_number(c.cell.gamma2) << ',' << e.param << ',' << c.cell.rule.label()
                << ',' << format_number(e.bias) << ',' << format_number(e.mse) << ',' << to_string(c.cell.scenario)
                << ',' << e.draws.size() << '\n';
        }
    }
}

void write_mc_json(const McReport& report, std::ostream& out, std::string_view generated_at) {
    nlohmann::ordered_json j;
    j["schema_version"] = "invcure.mc-report/1";
    if (!generated_at.empty()) j["generated_at"] = generated_at;
    j["seed"] = report.seed;
    j["reps"] = report.reps;
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) {
        nlohmann::ordered_json cell;
        cell["scenario"] = to_string(c.cell.scenario);
        cell["n"] = c.cell.n;
        cell["gamma2"] = c.cell.gamma2;
        cell["rule"] = c.cell.rule.label();
        cell["failures"] = c.failures;
        cell["boundary_hits"] = c.boundary_hits;
        cell["mean_cure_rate"] = c.mean_cure_rate;
        cell["estimates"] = nlohmann::ordered_json::array();
        for (const auto& e : c.estimates) {
            cell["estimates"].push_back({{"param", e.param},
                                         {"truth", e.truth},
                                         {"bias", e.bias},
                                         {"mse", e.mse},
                                         {"variance", e.variance},
                                         {"draws", e.draws}});
        }
        j["cells"].push_back(std::move(cell));
    }
    out << j.dump(2) << '\n';
}

std::vector<QqPoint> qq_data(std::span<const double> draws) {
    const std::size_t m = draws.size();
    if (m < 20) throw InvalidArgument("QQ data needs at least 20 replicates");
    std::vector<double> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double d : sorted) mean += d;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double d : sorted) var += (d - mean) * (d - mean);
    const double sd = std::sqrt(var / static_cast<double>(m - 1));
    if (!(sd > 0.0)) throw InvalidArgument("QQ data: replicates have zero variance");

    const boost::math::normal_distribution<double> normal;
    std::vector<QqPoint> points(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double pos = (static_cast<double>(i + 1) - 0.375) / (static_cast<double>(m) + 0.25);
        points[i] = {boost::math::quantile(normal, pos), (sorted[i] - mean) / sd};
    }
    return points;
}

std::vector<QqPoint> qq_data(const McReport& report, std::size_t cell, int coordinate) {
    if (cell >= report.cells.size() || coordinate < 0 || coordinate > 1)
        throw InvalidArgument("qq_data: no such cell or coordinate");
    return qq_data(report.cells[cell].estimates[static_cast<std::size_t>(coordinate)].draws);
}

double qq_correlation(std::span<const QqPoint> points) {
    const double m = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.theoretical;
        my += p.empirical;
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& p : points) {
        sxy += (p.theoretical - mx) * (p.empirical - my);
        sxx += (p.theoretical - mx) * (p.theoretical - mx);
        syy += (p.empirical - my) * (p.empirical - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace invcure
