#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sglig/prox.hpp"

namespace sglig {

struct SolverConfig {
    Index max_iter = 5000;
    double tol = 1e-6;        ///< relative change in beta between iterations
    ProjectorKind projector;
    double step_scale = 1.0;  ///< multiplies the 1/sigma step

    void validate() const;
};

struct FitResult {
    Vector beta;
    Index iterations = 0;
    bool converged = false;
    std::vector<Index> active_final;
    std::vector<double> loss_trace;
    double wall_time = 0.0;
    double sigma = 0.0;
};

/// Least-squares design with quantities reused across fits.
class Design {
public:
    Design(Matrix x, Vector y);
    /// Reuses a step constant computed elsewhere (e.g. once per training split).
    Design(Matrix x, Vector y, double sigma);

    const Matrix& x() const noexcept { return x_; }
    const Vector& y() const noexcept { return y_; }
    const Vector& xty() const noexcept { return xty_; }
    double sigma() const noexcept { return sigma_; }
    Index n() const noexcept { return x_.rows(); }
    Index p() const noexcept { return x_.cols(); }

private:
    Matrix x_;
    Vector y_;
    Vector xty_;
    double sigma_ = 0.0;
};

/// sigma = ||X^T X|| / n.
double step_constant(const Matrix& x);

/// (1/2n) ||y - X beta||^2.
double loss(const Matrix& x, const Vector& y, const Vector& beta);

/// Next FISTA momentum weight.
inline double next_momentum(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

/// Accelerated proximal gradient with the doubly projected prox step.
/// Starts from `warm_start` when given, else from zero.
FitResult fit(const Design& design, const GroupRadii& radii, const SolverConfig& config,
              const std::optional<Vector>& warm_start = std::nullopt);

FitResult fit(const Matrix& x, const Vector& y, const GroupRadii& radii, const SolverConfig& config);

} // namespace sglig
