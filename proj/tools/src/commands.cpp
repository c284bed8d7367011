#include "commands.hpp"

#include <invcure/bootstrap.hpp>
#include <invcure/dataset.hpp>
#include <invcure/error.hpp>
#include <invcure/fit.hpp>
#include <invcure/inversion.hpp>
#include <invcure/kernel.hpp>
#include <invcure/likelihood.hpp>
#include <invcure/monte_carlo.hpp>
#include <invcure/rng.hpp>
#include <invcure/simulation.hpp>

#include <json.hpp>

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <tuple>

namespace invcure::cli {

namespace {

using json = nlohmann::ordered_json;

/// stdout for "-", otherwise a truncated file.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path == "-") return;
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) throw ParseError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

SurvivalDataset read_input(const std::string& path) {
    if (path == "-") return parse_csv(std::cin, "<stdin>");
    return load_csv(path);
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

json pair(const Beta& b) { return json::array({b[0], b[1]}); }

LatencyTail parse_tail(const std::string& name) {
    if (name == "proper") return LatencyTail::proper;
    if (name == "defective") return LatencyTail::defective;
    throw InvalidArgument("--tail: expected proper or defective, got '" + name + "'");
}

FitOptions fit_options(const ModelFlags& flags) {
    if (flags.restarts < 0) throw InvalidArgument("--restarts must be >= 0");
    FitOptions opts;
    opts.box = flags.param_box();
    opts.restarts = flags.restarts;
    if (flags.max_evals < 1) throw InvalidArgument("--max-evals must be >= 1");
    opts.max_evals = flags.max_evals;
    opts.seed = flags.seed;
    return opts;
}

Beta beta_from_fit_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open fit report '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (doc.value("schema_version", "") != "invcure.fit/1")
        throw ParseError(path + ": not an invcure.fit/1 report");
    const auto& b = doc["beta_hat"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
        throw ParseError(path + ": beta_hat must be an array of two numbers");
    return Beta(b[0].get<double>(), b[1].get<double>());
}

struct Fitted {
    double h = 0.0;
    Beta beta = Beta::Zero();
};

/// Bandwidth from the rule, beta from a previous report or a fresh fit.
Fitted resolve_model(const SurvivalDataset& data, const ModelFlags& flags, const std::string& fit_json) {
    Fitted out;
    out.h = flags.rule().resolve(data);
    if (!fit_json.empty()) {
        out.beta = beta_from_fit_json(fit_json);
    } else {
        const auto result = fit(LikelihoodModel(data, KernelSpec(out.h), CureLink::logistic()), fit_options(flags));
        if (!result.converged) std::cerr << "invcure: warning: optimizer did not converge; curves use the best point\n";
        out.beta = result.beta_hat;
    }
    return out;
}

std::vector<double> distinct_times(const SurvivalDataset& data) {
    std::vector<double> t;
    for (const auto& r : data) t.push_back(r.time);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

} // namespace

int cmd_fit(const FitFlags& flags) {
    const auto data = read_input(flags.model.input);
    const auto rule = flags.model.rule();
    const double h = rule.resolve(data);
    const auto opts = fit_options(flags.model);
    const auto result = fit(LikelihoodModel(data, KernelSpec(h), CureLink::logistic()), opts);

    json doc;
    doc["schema_version"] = "invcure.fit/1";
    doc["generated_at"] = timestamp();
    doc["n"] = data.size();
    doc["events"] = data.event_count();
    doc["bandwidth"] = {{"rule", rule.label()}, {"h", h}};
    doc["box"] = {{"lower", pair(opts.box.lower)}, {"upper", pair(opts.box.upper)}};
    doc["seed"] = flags.model.seed;
    doc["beta_hat"] = pair(result.beta_hat);
    doc["loglik"] = result.loglik;
    doc["init"] = {{"stage1", pair(result.stage1)},
                   {"stage2", pair(result.stage2)},
                   {"stage2_at_boundary", result.stage2_at_boundary}};
    doc["diagnostics"] = {{"floor_events", result.floor_diagnostics},
                          {"converged", result.converged},
                          {"evals", result.evals},
                          {"at_boundary", result.at_boundary}};
    Sink sink(flags.model.output);
    sink.stream() << doc.dump(2) << '\n';

    if (result.at_boundary) std::cerr << "invcure: warning: beta_hat touches the parameter box; treat as suspect\n";
    if (!result.converged) {
        std::cerr << "invcure: Nelder-Mead did not converge within the evaluation budget\n";
        return 2;
    }
    return 0;
}

int cmd_curves(const CurveFlags& flags) {
    const auto xs = parse_grid(flags.x_grid, "--x-grid");
    const auto tail = parse_tail(flags.tail);
    const auto data = read_input(flags.model.input);
    const auto model = resolve_model(data, flags.model, flags.fit_json);
    const KernelSpec spec(model.h);
    const auto link = CureLink::logistic();
    const auto times = distinct_times(data);

    Sink sink(flags.model.output);
    auto& out = sink.stream();
    out << "x,t,phi_hat,F_C_tail,F_T0_tail,status\n";
    for (double x : xs) {
        const double phi = link.phi(x, model.beta);
        try {
            const auto sub = estimate_subdistributions(data, x, spec);
            const InversionGrid grid(sub.censored, sub.events);
            const auto hz = grid.latency_hazard(phi, tail).hazard;
            for (double t : times)
                out << format_number(x) << ',' << format_number(t) << ',' << format_number(phi) << ','
                    << format_number(grid.censoring_survival(t)) << ',' << format_number(product_integral(hz, t))
                    << ",ok\n";
        } catch (const EmptyNeighborhood&) {
            out << format_number(x) << ",," << format_number(phi) << ",,,empty_neighborhood\n";
        }
    }
    return 0;
}

int cmd_quantiles(const QuantileFlags& flags) {
    const auto xs = parse_grid(flags.x_grid, "--x-grid");
    const auto ps = parse_list(flags.quantiles, "--quantiles");
    for (double p : ps)
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("--quantiles: levels must lie in (0, 1)");
    const auto tail = parse_tail(flags.tail);
    const auto data = read_input(flags.model.input);
    const auto model = resolve_model(data, flags.model, flags.fit_json);
    const KernelSpec spec(model.h);
    const auto link = CureLink::logistic();

    Sink sink(flags.model.output);
    auto& out = sink.stream();
    out << "x,p,quantile,defective,status\n";
    for (double x : xs) {
        const double phi = link.phi(x, model.beta);
        std::optional<InversionGrid> grid;
        std::string status = "ok";
        try {
            const auto sub = estimate_subdistributions(data, x, spec);
            grid.emplace(sub.censored, sub.events);
            if (!grid->has_events()) status = "no_events";
        } catch (const EmptyNeighborhood&) {
            status = "empty_neighborhood";
        }
        for (double p : ps) {
            out << format_number(x) << ',' << format_number(p) << ',';
            if (status == "ok") {
                const auto q = latency_quantile(*grid, phi, p, tail);
                out << format_number(q.time) << ',' << (q.defective ? 1 : 0);
            } else {
                out << ',';
            }
            out << ',' << status << '\n';
        }
    }
    return 0;
}

int cmd_bootstrap(const BootstrapFlags& flags) {
    if (flags.resamples < 2) throw InvalidArgument("--boot-b must be >= 2");
    if (!(flags.level > 0.0 && flags.level < 1.0)) throw InvalidArgument("--level must lie in (0, 1)");
    const auto data = read_input(flags.model.input);
    const auto rule = flags.model.rule();
    const double h = rule.resolve(data);
    const auto link = CureLink::logistic();

    BootstrapOptions opts;
    opts.resamples = flags.resamples;
    opts.seed = flags.model.seed;
    opts.level = flags.level;
    opts.freeze_bandwidth = flags.freeze_bandwidth;
    opts.threads = flags.model.threads;
    opts.fit = fit_options(flags.model);

    const auto point = fit(LikelihoodModel(data, KernelSpec(h), link), opts.fit);
    const auto boot = bootstrap(data, rule, link, opts);

    json doc;
    doc["schema_version"] = "invcure.bootstrap/1";
    doc["generated_at"] = timestamp();
    doc["n"] = data.size();
    doc["B"] = flags.resamples;
    doc["seed"] = flags.model.seed;
    doc["bandwidth"] = {{"rule", rule.label()}, {"h", h}, {"frozen", flags.freeze_bandwidth}};
    doc["beta_hat"] = pair(point.beta_hat);
    doc["level"] = boot.level;
    doc["failures"] = boot.failures;
    doc["variance"] = json::array({pair(boot.variance.row(0).transpose()), pair(boot.variance.row(1).transpose())});
    json ci = json::array();
    for (const auto& iv : boot.ci) ci.push_back({{"lower", iv.lower}, {"upper", iv.upper}});
    doc["ci"] = ci;
    json reps = json::array();
    for (const auto& b : boot.replicates) reps.push_back(pair(b));
    doc["replicates"] = reps;

    Sink sink(flags.model.output);
    sink.stream() << doc.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const SimulateFlags& flags) {
    auto cfg = standard_design(parse_scenario(flags.scenario), 0.0, flags.n, flags.seed);
    if (!flags.beta0.empty()) {
        const auto b = parse_list(flags.beta0, "--beta0");
        if (b.size() != 2) throw InvalidArgument("--beta0: expected two values");
        cfg.beta0 = {b[0], b[1]};
    }
    if (!flags.gamma.empty()) {
        const auto g = parse_list(flags.gamma, "--gamma");
        if (g.size() != 3) throw InvalidArgument("--gamma: expected three values");
        cfg.gamma = {g[0], g[1], g[2]};
    }
    if (flags.gamma2) cfg.gamma[2] = *flags.gamma2;
    if (flags.censoring_mean) cfg.censoring_mean = *flags.censoring_mean;
    cfg.truncation = parse_truncation(flags.truncation);

    Sink sink(flags.output);
    auto& out = sink.stream();
    if (!flags.with_latents) {
        write_csv(simulate(cfg), out);
        return 0;
    }
    const auto trace = simulate_with_latents(cfg);
    out << "time,status,x,cured,latent_time,censor_time\n";
    for (std::size_t i = 0; i < trace.data.size(); ++i) {
        const auto& r = trace.data[i];
        const auto& l = trace.latents[i];
        out << format_number(r.time) << ',' << r.status << ',' << format_number(r.x) << ',' << (l.cured ? 1 : 0)
            << ',' << format_number(l.event_time) << ',' << format_number(l.censor_time) << '\n';
    }
    return 0;
}

int cmd_mc_table(const McFlags& flags) {
    if (flags.reps < 1) throw InvalidArgument("--reps must be >= 1");
    if (flags.restarts < 0) throw InvalidArgument("--restarts must be >= 0");
    McDesign design;
    design.truncation = parse_truncation(flags.truncation);
    design.quantile_levels = flags.quantiles.empty() ? std::vector<double>{} : parse_list(flags.quantiles, "--quantiles");
    for (double p : design.quantile_levels)
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("--quantiles: levels must lie in (0, 1)");
    design.quantile_x = flags.quantile_x;
    design.fit.restarts = flags.restarts;

    std::vector<CureScenario> scenarios;
    for (const auto& s : split(flags.scenario, ',')) scenarios.push_back(parse_scenario(s));
    const auto ns = parse_size_list(flags.n, "--n");
    const auto gammas = parse_list(flags.gamma2, "--gamma2");
    std::vector<BandwidthRule> rules;
    for (const auto& r : split(flags.rules, ',')) rules.push_back(parse_rule(r));
    for (auto sc : scenarios)
        for (auto n : ns) {
            if (n < 2) throw InvalidArgument("--n: sample sizes must be >= 2");
            for (double g : gammas)
                for (const auto& rule : rules) design.cells.push_back({sc, n, g, rule});
        }

    if (!flags.export_dir.empty()) {
        // Same datasets the harness fits, for running a competitor externally.
        std::filesystem::create_directories(flags.export_dir);
        std::set<std::tuple<int, std::size_t, double>> written;
        for (const auto& cell : design.cells) {
            if (!written.insert({static_cast<int>(cell.scenario), cell.n, cell.gamma2}).second) continue;
            for (std::size_t r = 0; r < flags.reps; ++r) {
                auto cfg = standard_design(cell.scenario, cell.gamma2, cell.n, substream_seed(flags.seed, r));
                cfg.truncation = design.truncation;
                const auto name = std::string(to_string(cell.scenario)) + "_n" + std::to_string(cell.n) + "_g" +
                                  format_number(cell.gamma2) + "_r" + std::to_string(r) + ".csv";
                write_csv(simulate(cfg), std::filesystem::path(flags.export_dir) / name);
            }
        }
    }

    const auto report = run_mc(design, flags.reps, flags.seed, flags.threads);
    {
        Sink sink(flags.output);
        write_mc_csv(report, sink.stream());
    }
    if (!flags.json.empty()) {
        Sink sink(flags.json);
        write_mc_json(report, sink.stream(), timestamp());
    }
    if (!flags.qq_output.empty()) {
        Sink sink(flags.qq_output);
        auto& out = sink.stream();
        out << "scenario,n,gamma2,rule,param,theoretical,empirical\n";
        for (std::size_t c = 0; c < report.cells.size(); ++c) {
            const auto& cell = report.cells[c].cell;
            for (int k = 0; k < 2; ++k) {
                std::vector<QqPoint> pts;
                try {
                    pts = qq_data(report, c, k);
                } catch (const InvalidArgument& e) {
                    std::cerr << "invcure: skipping QQ output for a cell: " << e.what() << '\n';
                    continue;
                }
                for (const auto& q : pts)
                    out << to_string(cell.scenario) << ',' << cell.n << ',' << format_number(cell.gamma2) << ','
                        << cell.rule.label() << ",beta" << (k + 1) << ',' << format_number(q.theoretical) << ','
                        << format_number(q.empirical) << '\n';
            }
        }
    }
    for (const auto& cell : report.cells)
        if (cell.failures > 0)
            std::cerr << "invcure: " << cell.failures << " of " << report.reps << " replicates excluded in cell n="
                      << cell.cell.n << " gamma2=" << format_number(cell.cell.gamma2) << ' ' << cell.cell.rule.label()
                      << '\n';
    return 0;
}

} // namespace invcure::cli
