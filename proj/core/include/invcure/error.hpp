#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace invcure {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or cell.
class ParseError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Every kernel weight vanished at covariate value `x`: the bandwidth is too
/// small there. `subject` is set when the evaluation point is a sample point.
class EmptyNeighborhood : public Error {
public:
    explicit EmptyNeighborhood(double x, std::optional<std::size_t> subject = std::nullopt);

    double x() const noexcept { return x_; }
    std::optional<std::size_t> subject() const noexcept { return subject_; }

private:
    double x_;
    std::optional<std::size_t> subject_;
};

class NoFeasibleBandwidth : public Error {
public:
    using Error::Error;
};

class RiskSetZero : public Error {
public:
    using Error::Error;
};

/// The binary labels of a logistic fit are all equal.
class SeparationError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class BootstrapUnstable : public Error {
public:
    using Error::Error;
};

} // namespace invcure
