#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "sglig/solver.hpp"

using namespace sglig;
using doctest::Approx;

namespace {

struct Problem {
    Matrix x;
    Vector y;
};

Problem random_problem(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Problem out{Matrix(n, p), Vector(n)};
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) out.x(i, j) = rng.normal();
    Vector beta(p);
    for (auto& b : beta) b = rng.normal();
    for (Index i = 0; i < n; ++i) out.y[i] = out.x.row(i).dot(beta) + 0.1 * rng.normal();
    return out;
}

GroupRadii path_radii(Index p, double tau, double xi) {
    GroupRadii r;
    r.groups = all_neighborhoods(UndirectedGraph::path(p));
    r.tau_star.assign(static_cast<std::size_t>(p), tau);
    r.xi_star.assign(static_cast<std::size_t>(p), xi);
    return r;
}

} // namespace

TEST_SUITE("solver") {

TEST_CASE("step constant") {
    CHECK(step_constant(Matrix::Identity(3, 3)) == Approx(1.0 / 3.0));
    CHECK(step_constant(2.0 * Matrix::Identity(2, 2)) == Approx(2.0));
    const auto prob = random_problem(50, 10, 4);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(prob.x.transpose() * prob.x);
    CHECK(step_constant(prob.x) * 50 == Approx(es.eigenvalues().maxCoeff()).epsilon(1e-8));
    CHECK_THROWS_AS(step_constant(Matrix::Zero(3, 2)), InvalidArgument);
}

TEST_CASE("loss and momentum") {
    Matrix x(2, 1);
    x << 1, 1;
    CHECK(loss(x, Eigen::Vector2d(1, 3), Vector::Constant(1, 2.0)) == Approx(0.5));
    CHECK(loss(x, Eigen::Vector2d(1, 3), Vector::Zero(1)) == Approx(10.0 / 4.0));
    CHECK(next_momentum(1.0) == Approx(1.61803398875));
}

TEST_CASE("zero penalty recovers least squares") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto prob = random_problem(200, 20, seed);
        const auto r = path_radii(20, 0.0, 0.0);
        SolverConfig cfg;
        cfg.tol = 1e-10;
        cfg.max_iter = 20000;
        const auto fit_result = fit(prob.x, prob.y, r, cfg);
        const Vector ols = oracle::least_squares(prob.x, prob.y);
        CHECK(fit_result.converged);
        CHECK((fit_result.beta - ols).norm() <= 1e-4 * ols.norm());
    }
}

TEST_CASE("full shrinkage returns zero") {
    const auto prob = random_problem(40, 6, 3);
    const auto r = path_radii(6, 1e6, 1e6);
    const auto res = fit(prob.x, prob.y, r, SolverConfig{});
    CHECK(res.beta.isZero(0.0));
    CHECK(res.converged);
    CHECK(res.iterations <= 2);
}

TEST_CASE("loss trace envelope, determinism and warm-start fixed point") {
    const auto prob = random_problem(60, 12, 8);
    const auto r = path_radii(12, 0.3, 0.2);
    const Design design(prob.x, prob.y);
    SolverConfig cfg;
    const auto a = fit(design, r, cfg);
    const auto b = fit(design, r, cfg);
    CHECK(a.beta == b.beta);
    CHECK(a.iterations == b.iterations);
    CHECK(static_cast<Index>(a.loss_trace.size()) == a.iterations);
    REQUIRE(a.converged);
    CHECK(a.loss_trace.back() <= loss(prob.x, prob.y, Vector::Zero(12)));
    CHECK(a.sigma == Approx(step_constant(prob.x)));

    const auto again = fit(design, r, cfg, a.beta);
    CHECK(again.iterations <= 2);
    CHECK((again.beta - a.beta).norm() <= cfg.tol * std::max(1.0, a.beta.norm()));
}

TEST_CASE("shrinkage grows with the radii") {
    const auto prob = random_problem(80, 10, 12);
    const Design design(prob.x, prob.y);
    double last = std::numeric_limits<double>::infinity();
    for (double tau : {0.05, 0.2, 0.8}) {
        const auto res = fit(design, path_radii(10, tau, kUnconstrained), SolverConfig{});
        CHECK(res.beta.norm() <= last + 1e-6);
        last = res.beta.norm();
    }
}

TEST_CASE("invalid inputs") {
    const auto prob = random_problem(10, 3, 1);
    auto r = path_radii(3, 1, 1);
    SolverConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(fit(prob.x, prob.y, r, bad), InvalidArgument);
    r.tau_star[0] = -1.0;
    CHECK_THROWS_AS(fit(prob.x, prob.y, r, SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(fit(prob.x, Vector::Zero(4), path_radii(3, 1, 1), SolverConfig{}), InvalidArgument);
}

}
