#include "commands.hpp"

#include <invcure/error.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace invcure::cli;

enum Exit : int { kOk = 0, kInput = 1, kNonConvergence = 2, kInternal = 3 };

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool seed_required) {
    cmd->add_option("--input,-i", f.input, "CSV with columns time,status,x ('-' for stdin)")->required();
    cmd->add_option("--output,-o", f.output, "output path ('-' for stdout)");
    auto* c = cmd->add_option("--bandwidth-c", f.bandwidth_c, "h = c * n^(-2/7) (default c = 3)");
    auto* h = cmd->add_option("--bandwidth", f.bandwidth, "fixed bandwidth h");
    auto* cv = cmd->add_flag("--cv", f.cv, "cross-validated bandwidth");
    c->excludes(h)->excludes(cv);
    h->excludes(cv);
    cmd->add_option("--box", f.box, "parameter box 'lo,hi' applied to both coordinates")->capture_default_str();
    cmd->add_option("--restarts", f.restarts, "perturbed Nelder-Mead restarts")->capture_default_str();
    cmd->add_option("--max-evals", f.max_evals, "evaluation budget per Nelder-Mead run")->capture_default_str();
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)")->capture_default_str();
    auto* seed = cmd->add_option("--seed", f.seed, "64-bit seed");
    if (seed_required) seed->required();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixture cure models fitted through an inversion-formula likelihood"};
    app.name("invcure");
    app.require_subcommand(1);
    app.set_version_flag("--version", "invcure 0.1.0");

    FitFlags fit_flags;
    auto* fit = app.add_subcommand("fit", "fit the logistic incidence model; writes a JSON report");
    add_model_flags(fit, fit_flags.model, false);

    CurveFlags curve_flags;
    auto* curves = app.add_subcommand("curves", "phi_hat, censoring and latency survival on an x-grid (CSV)");
    add_model_flags(curves, curve_flags.model, false);
    curves->add_option("--x-grid", curve_flags.x_grid, "'a:b:step' or a comma list")->capture_default_str();
    curves->add_option("--fit-json", curve_flags.fit_json, "reuse beta_hat from a fit report");
    curves->add_option("--tail", curve_flags.tail, "latency tail: proper or defective")->capture_default_str();

    QuantileFlags quantile_flags;
    auto* quantiles = app.add_subcommand("quantiles", "conditional latency quantiles (CSV)");
    add_model_flags(quantiles, quantile_flags.model, false);
    quantiles->add_option("--x-grid", quantile_flags.x_grid, "'a:b:step' or a comma list")->capture_default_str();
    quantiles->add_option("--quantiles", quantile_flags.quantiles, "levels in (0, 1)")->capture_default_str();
    quantiles->add_option("--fit-json", quantile_flags.fit_json, "reuse beta_hat from a fit report");
    quantiles->add_option("--tail", quantile_flags.tail, "latency tail: proper or defective")->capture_default_str();

    BootstrapFlags boot_flags;
    auto* boot = app.add_subcommand("bootstrap", "naive bootstrap of beta_hat; writes a JSON report");
    add_model_flags(boot, boot_flags.model, true);
    boot->add_option("--boot-b,-B", boot_flags.resamples, "number of resamples")->capture_default_str();
    boot->add_option("--level", boot_flags.level, "percentile interval coverage")->capture_default_str();
    boot->add_flag("--freeze-bandwidth", boot_flags.freeze_bandwidth, "reuse the original-sample bandwidth");

    SimulateFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "draw a dataset from the simulation design (CSV)");
    sim->add_option("--output,-o", sim_flags.output, "output path ('-' for stdout)");
    sim->add_option("--n", sim_flags.n, "sample size")->capture_default_str();
    sim->add_option("--scenario", sim_flags.scenario, "cure20 or cure30")->capture_default_str();
    sim->add_option("--beta0", sim_flags.beta0, "override 'b1,b2'");
    sim->add_option("--gamma", sim_flags.gamma, "override 'g0,g1,g2'");
    sim->add_option("--gamma2", sim_flags.gamma2, "override g2 only");
    sim->add_option("--censoring-mean", sim_flags.censoring_mean, "override the censoring mean");
    sim->add_option("--truncation", sim_flags.truncation, "atom or cure")->capture_default_str();
    sim->add_option("--seed", sim_flags.seed, "64-bit seed")->required();
    sim->add_flag("--with-latents", sim_flags.with_latents, "append cured,latent_time,censor_time");

    McFlags mc_flags;
    auto* mc = app.add_subcommand("mc-table", "Monte-Carlo bias/MSE table over a design grid (CSV)");
    mc->add_option("--output,-o", mc_flags.output, "table path ('-' for stdout)");
    mc->add_option("--reps", mc_flags.reps, "replications per cell")->capture_default_str();
    mc->add_option("--seed", mc_flags.seed, "64-bit seed")->required();
    mc->add_option("--n", mc_flags.n, "sample sizes, comma separated")->capture_default_str();
    mc->add_option("--gamma2", mc_flags.gamma2, "gamma2 values, comma separated")->capture_default_str();
    mc->add_option("--scenario", mc_flags.scenario, "cure20,cure30")->capture_default_str();
    mc->add_option("--rules", mc_flags.rules, "bandwidth rules, e.g. 'c=2,c=3,cv'")->capture_default_str();
    mc->add_option("--quantiles", mc_flags.quantiles, "latency quantile levels ('' for none)")->capture_default_str();
    mc->add_option("--quantile-x", mc_flags.quantile_x, "covariate value for the quantiles")->capture_default_str();
    mc->add_option("--truncation", mc_flags.truncation, "atom or cure")->capture_default_str();
    mc->add_option("--restarts", mc_flags.restarts, "perturbed Nelder-Mead restarts")->capture_default_str();
    mc->add_option("--threads", mc_flags.threads, "worker threads (0 = all cores)")->capture_default_str();
    mc->add_option("--json", mc_flags.json, "also write the JSON report with replicate draws");
    mc->add_option("--export-dir", mc_flags.export_dir, "write every simulated dataset as CSV");
    mc->add_option("--qq-output", mc_flags.qq_output, "QQ points of beta_hat per cell (CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInput;
    }

    try {
        if (*fit) return cmd_fit(fit_flags);
        if (*curves) return cmd_curves(curve_flags);
        if (*quantiles) return cmd_quantiles(quantile_flags);
        if (*boot) return cmd_bootstrap(boot_flags);
        if (*sim) return cmd_simulate(sim_flags);
        if (*mc) return cmd_mc_table(mc_flags);
    } catch (const invcure::ConvergenceError& e) {
        std::cerr << "invcure: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const invcure::BootstrapUnstable& e) {
        std::cerr << "invcure: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const invcure::Error& e) {
        std::cerr << "invcure: " << e.what() << '\n';
        return kInput;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "invcure: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "invcure: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
