#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace sglig {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by iterative routines that hit their iteration cap.
/// Carries the last iterate so callers can inspect or recover it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, Vector last_iterate = {}, double residual = 0.0)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

    const Vector& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    Vector last_iterate_;
    double residual_;
};

class NotPositiveDefinite : public std::runtime_error {
public:
    explicit NotPositiveDefinite(Index pivot)
        : std::runtime_error("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
          pivot_(pivot) {}

    Index pivot() const noexcept { return pivot_; }

private:
    Index pivot_;
};

class DegenerateSpectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, Index iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    Index iteration() const noexcept { return iteration_; }

private:
    Index iteration_;
};

} // namespace sglig
