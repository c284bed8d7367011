#include "invcure/logistic.hpp"

#include "invcure/error.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

namespace invcure {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) noexcept {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double objective(std::span<const double> x, std::span<const double> y, const Beta& beta) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double eta = beta[0] + beta[1] * x[i];
        total -= y[i] * softplus(-eta) + (1.0 - y[i]) * softplus(eta);
    }
    return total;
}

} // namespace

LogisticFit fit_logistic(std::span<const double> x, std::span<const double> labels, const Beta& start,
                         const ParamBox& box, double grad_tol, int max_iter) {
    if (x.size() != labels.size() || x.empty()) throw InvalidArgument("logistic fit: x and labels must match");

    const CureLink link = CureLink::logistic();
    LogisticFit fit;
    fit.beta = box.project(start);
    double value = objective(x, labels, fit.beta);

    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::Vector2d grad = Eigen::Vector2d::Zero();
        Eigen::Matrix2d info = Eigen::Matrix2d::Zero();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double p = link.phi(x[i], fit.beta);
            const double v = p * link.cure_probability(x[i], fit.beta);
            const Eigen::Vector2d z(1.0, x[i]);
            grad += (labels[i] - p) * z;
            info += v * z * z.transpose();
        }
        fit.iterations = iter;

        // Coordinates pinned against the box with the gradient pointing out
        // stay fixed; Newton runs on the rest.
        std::array<bool, 2> free{true, true};
        Eigen::Vector2d projected = grad;
        for (int k = 0; k < 2; ++k) {
            const bool at_lower = fit.beta[k] <= box.lower[k] && grad[k] < 0.0;
            const bool at_upper = fit.beta[k] >= box.upper[k] && grad[k] > 0.0;
            if (at_lower || at_upper) {
                free[k] = false;
                projected[k] = 0.0;
            }
        }
        if (projected.lpNorm<Eigen::Infinity>() < grad_tol) {
            fit.at_boundary = box.on_boundary(fit.beta);
            return fit;
        }

        // Minimum-norm Newton direction: the information matrix is singular
        // when the covariate is constant.
        Eigen::Vector2d dir = Eigen::Vector2d::Zero();
        if (free[0] && free[1]) {
            dir = info.completeOrthogonalDecomposition().solve(grad);
        } else {
            for (int k = 0; k < 2; ++k)
                if (free[k] && info(k, k) > 0.0) dir[k] = grad[k] / info(k, k);
        }
        double step = 1.0;
        bool moved = false;
        while (step > 1e-12) {
            const Beta trial = box.project(fit.beta + step * dir);
            const double trial_value = objective(x, labels, trial);
            if (trial_value > value) {
                moved = (trial - fit.beta).lpNorm<Eigen::Infinity>() > 0.0;
                fit.beta = trial;
                value = trial_value;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            // No ascent possible: either pinned against the box or already at
            // the optimum to machine precision.
            fit.at_boundary = box.on_boundary(fit.beta);
            if (fit.at_boundary || grad.lpNorm<Eigen::Infinity>() < 1e-6 * (1.0 + std::abs(value))) return fit;
            throw ConvergenceError("logistic Newton iteration stalled away from a stationary point");
        }
    }
    throw ConvergenceError("logistic Newton iteration did not converge in " + std::to_string(max_iter) + " steps");
}

} // namespace invcure
