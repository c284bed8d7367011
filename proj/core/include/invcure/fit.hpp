#pragma once

#include "invcure/dataset.hpp"
#include "invcure/kernel.hpp"
#include "invcure/likelihood.hpp"
#include "invcure/link.hpp"

#include <cstddef>
#include <cstdint>

namespace invcure {

struct FitOptions {
    ParamBox box = ParamBox::uniform(-10.0, 10.0);
    /// Extra Nelder-Mead runs from starts perturbed around the stage-2 point.
    int restarts = 3;
    /// Perturbation half-width as a fraction of each box side.
    double restart_scale = 0.25;
    /// Points per axis of a coarse lattice over the box scanned before the
    /// local search; the best `scan_starts` lattice points become extra
    /// Nelder-Mead starts. 0 disables the scan.
    int scan_points = 21;
    int scan_starts = 2;
    double tolerance = 1e-6;
    int max_evals = 2000;  ///< per Nelder-Mead run
    std::uint64_t seed = 0;
};

struct FitResult {
    Beta beta_hat = Beta::Zero();
    double loglik = 0.0;
    Beta stage1 = Beta::Zero();  ///< logistic fit on the censoring indicator
    Beta stage2 = Beta::Zero();  ///< logistic fit on the model-free uncure weights
    bool stage2_at_boundary = false;
    std::size_t floor_diagnostics = 0;  ///< floor events of loglik at beta_hat
    bool converged = false;
    int evals = 0;
    bool at_boundary = false;  ///< beta_hat within 10 * tolerance of the box: treat as suspect
};

/// Logistic regression of delta on (1, X): the censoring indicator stands in
/// for the unobserved susceptibility label. Throws SeparationError if every
/// delta is equal.
Beta init_stage1(const SurvivalDataset& data, const CureLink& link,
                 const ParamBox& box = ParamBox::uniform(-10.0, 10.0));

struct Stage2Result {
    Beta beta = Beta::Zero();
    bool at_boundary = false;
};

/// Logistic fit with fractional labels pi_i = 1 - (model-free cure estimate
/// at X_i), started from `start`. The objective is concave, so the result
/// does not depend on the start unless the box binds.
Stage2Result init_stage2(const LikelihoodModel& model, const Beta& start,
                         const ParamBox& box = ParamBox::uniform(-10.0, 10.0));
Stage2Result init_stage2(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link,
                         const Beta& start, const ParamBox& box = ParamBox::uniform(-10.0, 10.0));

/// Maximizes the semiparametric likelihood: stage 1, stage 2, then
/// Nelder-Mead from the stage-2 point, `restarts` perturbed starts and the
/// best lattice points; the best run wins.
FitResult fit(const LikelihoodModel& model, const FitOptions& options = {});
FitResult fit(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link,
              const FitOptions& options = {});

} // namespace invcure
