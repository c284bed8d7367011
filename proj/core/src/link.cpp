#include "invcure/link.hpp"

#include "invcure/error.hpp"

#include <cmath>

namespace invcure {

CureLink CureLink::constant(double c) {
    if (!(c > 0.0 && c <= 1.0)) throw InvalidArgument("constant link value must lie in (0, 1]");
    return CureLink(Kind::constant, c);
}

double CureLink::phi(double x, const Beta& beta) const noexcept {
    if (kind_ == Kind::constant) return value_;
    const double eta = beta[0] + beta[1] * x;
    return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

double CureLink::cure_probability(double x, const Beta& beta) const noexcept {
    if (kind_ == Kind::constant) return 1.0 - value_;
    const double eta = beta[0] + beta[1] * x;
    return eta <= 0.0 ? 1.0 / (1.0 + std::exp(eta)) : std::exp(-eta) / (1.0 + std::exp(-eta));
}

Beta CureLink::gradient(double x, const Beta& beta) const noexcept {
    if (kind_ == Kind::constant) return Beta::Zero();
    const double s = phi(x, beta) * cure_probability(x, beta);
    return Beta(s, s * x);
}

ParamBox::ParamBox(const Beta& lo, const Beta& hi) : lower(lo), upper(hi) {
    for (int k = 0; k < 2; ++k)
        if (!(lower[k] < upper[k])) throw InvalidArgument("parameter box needs lower < upper in every coordinate");
}

Beta ParamBox::project(const Beta& beta) const noexcept {
    return beta.cwiseMax(lower).cwiseMin(upper);
}

bool ParamBox::contains(const Beta& beta) const noexcept {
    return (beta.array() >= lower.array()).all() && (beta.array() <= upper.array()).all();
}

bool ParamBox::on_boundary(const Beta& beta, double tol) const noexcept {
    for (int k = 0; k < 2; ++k)
        if (std::abs(beta[k] - lower[k]) <= tol || std::abs(beta[k] - upper[k]) <= tol) return true;
    return false;
}

} // namespace invcure
