#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "sglig/numerics.hpp"

using namespace sglig;
using doctest::Approx;

namespace {

Matrix random_spd(Index p, Rng& rng) {
    Matrix a(p, p);
    for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < p; ++j) a(i, j) = rng.normal();
    return a * a.transpose() + static_cast<double>(p) * Matrix::Identity(p, p);
}

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST_SUITE("numerics") {

TEST_CASE("spectral norm examples") {
    CHECK(spectral_norm_sym(Eigen::Vector2d(2, 1).asDiagonal().toDenseMatrix()).value == Approx(2.0).epsilon(1e-10));
    CHECK(spectral_norm_sym(Matrix::Identity(5, 5)).value == Approx(1.0).epsilon(1e-10));
    CHECK(spectral_norm_sym(mat2(2, 1, 1, 2)).value == Approx(3.0).epsilon(1e-10));
    CHECK(spectral_norm_sym(Matrix::Zero(3, 3)).value == 0.0);
}

TEST_CASE("spectral norm bounds every Rayleigh quotient") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = random_spd(8, rng);
        const double top = spectral_norm_sym(m).value;
        for (int k = 0; k < 20; ++k) {
            Vector u(8);
            for (auto& v : u) v = rng.normal();
            CHECK(top >= u.dot(m * u) / u.squaredNorm() * (1.0 - 1e-10));
        }
    }
}

TEST_CASE("spectral norm is deterministic per seed") {
    Rng rng(3);
    const Matrix m = random_spd(12, rng);
    PowerIterationOptions opts;
    opts.seed = 77;
    const auto a = spectral_norm_sym(m, opts);
    const auto b = spectral_norm_sym(m, opts);
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("power iteration reports non-convergence") {
    Matrix m = Matrix::Identity(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 0.999999;
    PowerIterationOptions opts;
    opts.max_iter = 2;
    opts.tol = 1e-15;
    CHECK_THROWS_AS(spectral_norm_sym(m, opts), ConvergenceError);
}

TEST_CASE("extreme eigenvalues") {
    auto e = extreme_eigs_sym(Eigen::Vector2d(3, -1).asDiagonal().toDenseMatrix());
    CHECK(e.min == Approx(-1.0).epsilon(1e-9));
    CHECK(e.max == Approx(3.0).epsilon(1e-9));
    e = extreme_eigs_sym(Matrix::Identity(4, 4));
    CHECK(e.min == Approx(1.0));
    CHECK(e.max == Approx(1.0));
    e = extreme_eigs_sym(mat2(0, 0.5, 0.5, 0));
    CHECK(e.min == Approx(-0.5).epsilon(1e-9));
    CHECK(e.max == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("extreme eigenvalues agree with a dense eigensolver") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix m(10, 10);
        for (Index i = 0; i < 10; ++i)
            for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.normal();
        const Eigen::SelfAdjointEigenSolver<Matrix> oracle(m);
        const auto e = extreme_eigs_sym(m);
        CHECK(e.min == Approx(oracle.eigenvalues()(0)).epsilon(1e-6));
        CHECK(e.max == Approx(oracle.eigenvalues()(9)).epsilon(1e-6));
    }
}

TEST_CASE("cholesky examples") {
    const Matrix l = cholesky(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix());
    CHECK(l.isApprox(Eigen::Vector2d(2, 3).asDiagonal().toDenseMatrix()));
    CHECK(cholesky(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
    CHECK(cholesky(mat2(4, 2, 2, 5)).isApprox(mat2(2, 0, 1, 2)));
}

TEST_CASE("cholesky rejects indefinite input and names the pivot") {
    Matrix m = Matrix::Identity(3, 3);
    m(2, 2) = -1.0;
    try {
        cholesky(m);
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot() == 2);
    }
}

TEST_CASE("cholesky reconstruction on random SPD matrices") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const Index p = 1 + static_cast<Index>(rng.below(60));
        const Matrix m = random_spd(p, rng);
        const Matrix l = cholesky(m);
        CHECK(l.isLowerTriangular());
        CHECK((l * l.transpose() - m).norm() <= 1e-10 * m.norm());
    }
}

TEST_CASE("solve_spd") {
    CHECK(solve_spd(Matrix::Identity(3, 3), Eigen::Vector3d(1, 2, 3)).isApprox(Eigen::Vector3d(1, 2, 3)));
    CHECK(solve_spd(Eigen::Vector2d(2, 4).asDiagonal().toDenseMatrix(), Eigen::Vector2d(2, 8))
              .isApprox(Eigen::Vector2d(1, 2)));
    CHECK(solve_spd(mat2(4, 2, 2, 5), Eigen::Vector2d(6, 7)).isApprox(Eigen::Vector2d(1, 1)));

    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = random_spd(15, rng);
        Vector x(15);
        for (auto& v : x) v = rng.normal();
        CHECK((solve_spd(m, m * x) - x).norm() <= 1e-8 * x.norm());
    }
    const Matrix m = random_spd(6, rng);
    CHECK((inverse_spd(m) * m).isApprox(Matrix::Identity(6, 6), 1e-10));
}

TEST_CASE("rng streams are reproducible and split independently") {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());

    Rng base(42);
    Rng child = base.split(1);
    CHECK(base.counter() == 0);
    CHECK(child.next_u64() != Rng(42).next_u64());
    CHECK(base.split(1).next_u64() == Rng(42).split(1).next_u64());

    Rng u(9);
    double lo = 1.0, hi = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double x = u.uniform();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        CHECK(u.below(7) < 7u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
}

TEST_CASE("normal draws have unit moments") {
    Rng rng(8);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == Approx(1.0).epsilon(0.02));
    CHECK(normal_quantile(0.5) == Approx(0.0));
    CHECK(normal_quantile(0.975) == Approx(1.959964).epsilon(1e-6));
}

}
