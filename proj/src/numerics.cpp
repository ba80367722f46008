#include "sglig/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/normal.hpp>

namespace sglig {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + ": matrix must be square");
}

} // namespace

Rng::Rng(std::uint64_t seed) noexcept : key_(mix64(seed + kGolden)) {}

std::uint64_t Rng::next_u64() noexcept {
    const std::uint64_t c = counter_++;
    return mix64(key_ ^ mix64(c * kGolden + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_quantile(uniform()); }

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
}

Rng Rng::split(std::uint64_t stream) const noexcept {
    return Rng(mix64(key_ ^ mix64(stream + 0xD1B54A32D192ED03ULL)), 0);
}

double normal_quantile(double u) {
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, u);
}

SpectralEstimate spectral_norm_sym(const Matrix& m, const PowerIterationOptions& opts) {
    require_square(m, "spectral_norm_sym");
    if (!(opts.tol > 0)) throw InvalidArgument("spectral_norm_sym: tol must be positive");
    const Index n = m.rows();
    SpectralEstimate est;
    if (n == 0) return est;

    if (m.cwiseAbs().maxCoeff() == 0.0) return est;

    Rng rng(opts.seed);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    v.normalize();

    Vector w = m * v;
    double lambda = v.dot(w);
    for (Index it = 1; it <= opts.max_iter; ++it) {
        double norm = w.norm();
        while (norm == 0.0) {
            // Start vector fell into the null space; redraw.
            for (Index i = 0; i < n; ++i) v[i] = rng.normal();
            v.normalize();
            w.noalias() = m * v;
            norm = w.norm();
        }
        v = w / norm;
        w.noalias() = m * v;
        const double next = v.dot(w);
        const double change = std::abs(next - lambda);
        lambda = next;
        est.iterations = it;
        est.residual = change / std::max(std::abs(lambda), std::numeric_limits<double>::min());
        if (change <= opts.tol * std::abs(lambda)) {
            est.value = lambda;
            return est;
        }
    }
    throw ConvergenceError("spectral_norm_sym: no convergence after " + std::to_string(opts.max_iter) +
                               " iterations (last estimate " + std::to_string(lambda) + ")",
                           Vector::Constant(1, lambda), est.residual);
}

ExtremeEigenvalues extreme_eigs_sym(const Matrix& m, const PowerIterationOptions& opts) {
    require_square(m, "extreme_eigs_sym");
    if (m.rows() == 0) return {};
    // Gershgorin bound: m + shift*I is PSD.
    const double shift = m.cwiseAbs().rowwise().sum().maxCoeff();
    const Matrix id = Matrix::Identity(m.rows(), m.cols());

    ExtremeEigenvalues out;
    out.max = spectral_norm_sym(m + shift * id, opts).value - shift;
    PowerIterationOptions lower = opts;
    lower.seed = opts.seed ^ kGolden;
    // c*I - m is PSD with top eigenvalue c - lambda_min.
    const double c = out.max;
    out.min = c - spectral_norm_sym(c * id - m, lower).value;
    return out;
}

Matrix cholesky(const Matrix& m) {
    require_square(m, "cholesky");
    const Index n = m.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        double d = m(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0) || !std::isfinite(d)) throw NotPositiveDefinite(j);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Index i = j + 1; i < n; ++i) {
            l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
        }
    }
    return l;
}

Vector solve_lower(const Matrix& l, const Vector& b) {
    const Index n = l.rows();
    if (b.size() != n) throw InvalidArgument("solve_lower: dimension mismatch");
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = (b[i] - l.row(i).head(i).dot(x.head(i))) / l(i, i);
    return x;
}

Vector solve_lower_transpose(const Matrix& l, const Vector& b) {
    const Index n = l.rows();
    if (b.size() != n) throw InvalidArgument("solve_lower_transpose: dimension mismatch");
    Vector x(n);
    for (Index i = n - 1; i >= 0; --i) {
        x[i] = (b[i] - l.col(i).tail(n - 1 - i).dot(x.tail(n - 1 - i))) / l(i, i);
    }
    return x;
}

Vector solve_spd(const Matrix& m, const Vector& b) {
    if (m.rows() != b.size()) throw InvalidArgument("solve_spd: dimension mismatch");
    const Matrix l = cholesky(m);
    return solve_lower_transpose(l, solve_lower(l, b));
}

Matrix inverse_spd(const Matrix& m) {
    const Matrix l = cholesky(m);
    const Index n = m.rows();
    Matrix inv(n, n);
    Vector e = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
        e.setZero();
        e[j] = 1.0;
        inv.col(j) = solve_lower_transpose(l, solve_lower(l, e));
    }
    // Symmetrize away round-off.
    return (0.5 * (inv + inv.transpose())).eval();
}

} // namespace sglig
