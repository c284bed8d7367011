#pragma once

#include "invcure/link.hpp"

#include <functional>

namespace invcure {

struct NelderMeadOptions {
    double tolerance = 1e-6;  ///< stop once the simplex diameter falls below this
    int max_evals = 2000;
};

struct NelderMeadResult {
    Beta argmax = Beta::Zero();
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Derivative-free maximization on a box. Every trial point is projected onto
/// the box before evaluation. The initial simplex takes a step of
/// 0.1 * max(|start|) (0.1 if the start is zero) along each axis.
NelderMeadResult nelder_mead_maximize(const std::function<double(const Beta&)>& objective, const Beta& start,
                                      const ParamBox& box, const NelderMeadOptions& options = {});

} // namespace invcure
