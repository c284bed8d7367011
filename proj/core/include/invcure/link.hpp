#pragma once

#include <Eigen/Core>

namespace invcure {

/// Incidence parameter (intercept, slope).
using Beta = Eigen::Vector2d;

/// Parametric model phi(x, beta) for the probability of being susceptible
/// (not cured).
class CureLink {
public:
    enum class Kind { logistic, constant };

    /// phi(x, beta) = exp(b1 + b2 x) / (1 + exp(b1 + b2 x)).
    static CureLink logistic() noexcept { return CureLink(Kind::logistic, 0.0); }
    /// phi = c regardless of beta; its gradient is identically zero.
    static CureLink constant(double c);

    Kind kind() const noexcept { return kind_; }
    double constant_value() const noexcept { return value_; }
    static constexpr int dim = 2;

    double phi(double x, const Beta& beta) const noexcept;
    /// 1 - phi, evaluated without cancellation.
    double cure_probability(double x, const Beta& beta) const noexcept;
    Beta gradient(double x, const Beta& beta) const noexcept;

private:
    CureLink(Kind kind, double value) noexcept : kind_(kind), value_(value) {}

    Kind kind_;
    double value_;
};

/// Compact parameter set: a coordinate box.
struct ParamBox {
    ParamBox(const Beta& lower, const Beta& upper);
    static ParamBox uniform(double lo, double hi) { return ParamBox(Beta::Constant(lo), Beta::Constant(hi)); }

    Beta project(const Beta& beta) const noexcept;
    bool contains(const Beta& beta) const noexcept;
    bool on_boundary(const Beta& beta, double tol = 1e-9) const noexcept;
    Beta width() const noexcept { return upper - lower; }

    Beta lower;
    Beta upper;
};

} // namespace invcure
