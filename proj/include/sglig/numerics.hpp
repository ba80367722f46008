#pragma once

#include <cstdint>

#include "sglig/errors.hpp"

namespace sglig {

/// Counter-based 64-bit generator. The n-th draw of a stream is a pure
/// function of (key, n), so streams can be split and replayed exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal by inverse-CDF transform of one uniform draw.
    double normal();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept;
    bool bernoulli(double prob) noexcept { return uniform() < prob; }

    /// Independent child stream; does not advance this one.
    Rng split(std::uint64_t stream) const noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    Rng(std::uint64_t key, std::uint64_t counter) noexcept : key_(key), counter_(counter) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Inverse of the standard normal CDF.
double normal_quantile(double u);

struct SpectralEstimate {
    double value = 0.0;
    Index iterations = 0;
    double residual = 0.0;
};

struct PowerIterationOptions {
    double tol = 1e-10;
    Index max_iter = 10'000;
    std::uint64_t seed = 0x5eed;
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration with a
/// relative Rayleigh-quotient stopping test.
SpectralEstimate spectral_norm_sym(const Matrix& m, const PowerIterationOptions& opts = {});

struct ExtremeEigenvalues {
    double min = 0.0;
    double max = 0.0;
};

ExtremeEigenvalues extreme_eigs_sym(const Matrix& m, const PowerIterationOptions& opts = {});

/// Lower-triangular L with m = L L^T. Throws NotPositiveDefinite naming the pivot.
Matrix cholesky(const Matrix& m);

Vector solve_lower(const Matrix& l, const Vector& b);
/// Solves L^T x = b for lower-triangular L.
Vector solve_lower_transpose(const Matrix& l, const Vector& b);

Vector solve_spd(const Matrix& m, const Vector& b);
/// Inverse of an SPD matrix through its Cholesky factor.
Matrix inverse_spd(const Matrix& m);

} // namespace sglig
