#include "sglig/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "sglig/numerics.hpp"

namespace sglig {

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("solver max_iter must be at least 1");
    if (!(step_scale > 0.0)) throw InvalidArgument("step_scale must be positive");
    if (!(projector.tol > 0.0)) throw InvalidArgument("projector tolerance must be positive");
}

double step_constant(const Matrix& x) {
    if (x.rows() == 0) throw InvalidArgument("step_constant: empty design");
    const Matrix gram = x.transpose() * x;
    const double top = spectral_norm_sym(gram).value;
    if (!(top > 0.0)) throw InvalidArgument("step_constant: design matrix is zero");
    return top / static_cast<double>(x.rows());
}

Design::Design(Matrix x, Vector y) : Design(std::move(x), std::move(y), 0.0) {
    sigma_ = step_constant(x_);
}

Design::Design(Matrix x, Vector y, double sigma) : x_(std::move(x)), y_(std::move(y)), sigma_(sigma) {
    if (x_.rows() != y_.size()) throw InvalidArgument("design: X and y row counts differ");
    xty_ = x_.transpose() * y_;
}

double loss(const Matrix& x, const Vector& y, const Vector& beta) {
    if (x.rows() != y.size() || x.cols() != beta.size()) throw InvalidArgument("loss: dimension mismatch");
    return 0.5 * (y - x * beta).squaredNorm() / static_cast<double>(x.rows());
}

FitResult fit(const Design& design, const GroupRadii& radii, const SolverConfig& config,
              const std::optional<Vector>& warm_start) {
    config.validate();
    radii.validate();
    const auto start = std::chrono::steady_clock::now();
    const Index n = design.n();
    const Index p = design.p();
    for (const auto& nb : radii.groups)
        for (Index j : nb.members)
            if (j < 0 || j >= p) throw InvalidArgument("group member outside the design's columns");
    if (warm_start && warm_start->size() != p) throw InvalidArgument("warm start has the wrong length");

    FitResult out;
    out.sigma = design.sigma();
    if (!(out.sigma > 0.0)) throw InvalidArgument("step constant must be positive");
    const double step = config.step_scale / (static_cast<double>(n) * out.sigma);
    const double inv_2n = 0.5 / static_cast<double>(n);

    Vector beta_prev = warm_start ? *warm_start : Vector::Zero(p);
    Vector z = beta_prev;
    Vector residual(n);
    Vector h(p);
    double t = 1.0;

    for (Index m = 1; m <= config.max_iter; ++m) {
        // h = Z - (1/(n sigma)) X^T (X Z - y)
        residual.noalias() = design.x() * z;
        h.noalias() = design.x().transpose() * residual;
        h = z - step * (h - design.xty());

        ProxResult prox = prox_regularizer(h, radii, config.projector);
        Vector& beta = prox.beta;
        if (!beta.allFinite()) {
            throw DivergenceError("non-finite iterate at iteration " + std::to_string(m), m);
        }

        residual.noalias() = design.y() - design.x() * beta;
        out.loss_trace.push_back(inv_2n * residual.squaredNorm());
        out.iterations = m;
        out.active_final = std::move(prox.active);

        const double change = (beta - beta_prev).norm();
        if (change <= config.tol * std::max(1.0, beta_prev.norm())) {
            // Momentum can make one step look small; confirm with a plain
            // proximal-gradient step from beta before stopping.
            residual.noalias() = design.x() * beta;
            h.noalias() = design.x().transpose() * residual;
            h = beta - step * (h - design.xty());
            const Vector plain = prox_regularizer(h, radii, config.projector).beta;
            if ((plain - beta).norm() <= config.tol * std::max(1.0, beta.norm())) {
                out.converged = true;
                beta_prev = std::move(beta);
                break;
            }
        }

        const double t_next = next_momentum(t);
        z = beta + ((t - 1.0) / t_next) * (beta - beta_prev);
        t = t_next;
        beta_prev = std::move(beta);
    }

    out.beta = std::move(beta_prev);
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

FitResult fit(const Matrix& x, const Vector& y, const GroupRadii& radii, const SolverConfig& config) {
    return fit(Design(x, y), radii, config);
}

} // namespace sglig
