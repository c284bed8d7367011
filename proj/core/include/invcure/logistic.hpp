#pragma once

#include "invcure/link.hpp"

#include <span>

namespace invcure {

struct LogisticFit {
    Beta beta = Beta::Zero();
    bool at_boundary = false;
    int iterations = 0;
};

/// Maximizes sum_i [y_i log phi(x_i) + (1 - y_i) log(1 - phi(x_i))] for a
/// logistic phi and labels y_i in [0, 1], by damped Newton projected onto
/// `box`. Stops when the gradient's max-norm drops below `grad_tol`, or when
/// the box blocks every ascent step (then `at_boundary` is set).
/// Throws ConvergenceError after `max_iter` iterations.
LogisticFit fit_logistic(std::span<const double> x, std::span<const double> labels, const Beta& start,
                         const ParamBox& box, double grad_tol = 1e-8, int max_iter = 100);

} // namespace invcure
