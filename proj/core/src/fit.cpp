#include "invcure/fit.hpp"

#include "invcure/error.hpp"
#include "invcure/logistic.hpp"
#include "invcure/nelder_mead.hpp"
#include "invcure/rng.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace invcure {

namespace {

std::vector<double> covariates(const SurvivalDataset& data) {
    std::vector<double> x;
    x.reserve(data.size());
    for (const auto& r : data) x.push_back(r.x);
    return x;
}

void require_logistic(const CureLink& link) {
    if (link.kind() != CureLink::Kind::logistic)
        throw InvalidArgument("initialization and fitting require the logistic link");
}

} // namespace

Beta init_stage1(const SurvivalDataset& data, const CureLink& link, const ParamBox& box) {
    require_logistic(link);
    if (!data.has_events() || !data.has_censoring())
        throw SeparationError("all censoring indicators are equal; the stage-1 logistic fit is not identified "
                              "(a larger sample is needed)");
    std::vector<double> labels;
    labels.reserve(data.size());
    for (const auto& r : data) labels.push_back(r.status);
    return fit_logistic(covariates(data), labels, Beta::Zero(), box).beta;
}

Stage2Result init_stage2(const LikelihoodModel& model, const Beta& start, const ParamBox& box) {
    require_logistic(model.link());
    if (!start.allFinite()) throw InvalidArgument("stage-2 start must be finite");
    const auto labels = model.model_free_uncured();
    const auto fit = fit_logistic(covariates(model.data()), labels, start, box);
    return {fit.beta, fit.at_boundary};
}

Stage2Result init_stage2(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link,
                         const Beta& start, const ParamBox& box) {
    return init_stage2(LikelihoodModel(data, spec, link), start, box);
}

FitResult fit(const LikelihoodModel& model, const FitOptions& options) {
    require_logistic(model.link());
    if (!model.data().has_events()) throw InvalidArgument("no uncensored observation: the latency law is unidentified");

    FitResult result;
    result.stage1 = init_stage1(model.data(), model.link(), options.box);
    const auto stage2 = init_stage2(model, result.stage1, options.box);
    result.stage2 = stage2.beta;
    result.stage2_at_boundary = stage2.at_boundary;

    const auto objective = [&](const Beta& b) { return model.loglik(b).value; };
    const NelderMeadOptions nm{options.tolerance, options.max_evals};

    auto best = nelder_mead_maximize(objective, result.stage2, options.box, nm);
    result.evals = best.evals;
    SplitMix64 rng(substream_seed(options.seed, 0x5eed));
    for (int r = 0; r < options.restarts; ++r) {
        Beta offset;
        for (int k = 0; k < 2; ++k) offset[k] = (2.0 * rng.uniform() - 1.0) * options.restart_scale;
        const Beta start = options.box.project(result.stage2 + offset.cwiseProduct(options.box.width()));
        const auto run = nelder_mead_maximize(objective, start, options.box, nm);
        result.evals += run.evals;
        if (run.value > best.value) best = run;
    }

    // Small samples have several separated local maxima, often on the box
    // edges, that no perturbation of the stage-2 point reaches.
    if (options.scan_points >= 2 && options.scan_starts > 0) {
        std::vector<std::pair<double, Beta>> lattice;
        lattice.reserve(static_cast<std::size_t>(options.scan_points * options.scan_points));
        const Beta cell = options.box.width() / static_cast<double>(options.scan_points - 1);
        for (int a = 0; a < options.scan_points; ++a)
            for (int b = 0; b < options.scan_points; ++b) {
                const Beta p = options.box.lower + Beta(a * cell[0], b * cell[1]);
                lattice.emplace_back(objective(p), p);
            }
        result.evals += static_cast<int>(lattice.size());
        const auto keep = std::min<std::size_t>(static_cast<std::size_t>(options.scan_starts), lattice.size());
        std::partial_sort(lattice.begin(), lattice.begin() + static_cast<std::ptrdiff_t>(keep), lattice.end(),
                          [](const auto& l, const auto& r) { return l.first > r.first; });
        for (std::size_t k = 0; k < keep; ++k) {
            const auto run = nelder_mead_maximize(objective, lattice[k].second, options.box, nm);
            result.evals += run.evals;
            if (run.value > best.value) best = run;
        }
    }

    result.beta_hat = best.argmax;
    const auto value = model.loglik(best.argmax);
    result.loglik = value.value;
    result.floor_diagnostics = value.floor_events;
    result.converged = best.converged;
    // the simplex stops within `tolerance` of a face it is pressed against
    result.at_boundary = options.box.on_boundary(best.argmax, std::max(1e-9, 10.0 * options.tolerance));
    return result;
}

FitResult fit(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link, const FitOptions& options) {
    return fit(LikelihoodModel(data, spec, link), options);
}

} // namespace invcure
