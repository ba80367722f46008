#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "sglig/synth.hpp"

using namespace sglig;
using doctest::Approx;

namespace {

double condition(const Matrix& m) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

ScenarioSpec spec_of(ScenarioKind kind, std::uint64_t seed) {
    ScenarioSpec s;
    s.kind = kind;
    s.seed = seed;
    return s;
}

} // namespace

TEST_SUITE("synth") {

TEST_CASE("band matrix is deterministic tridiagonal") {
    ScenarioSpec s = spec_of(ScenarioKind::band, 1);
    s.p = 3;
    Matrix expect(3, 3);
    expect << 1.333, -0.667, 0, -0.667, 1.333, -0.667, 0, -0.667, 1.333;
    CHECK(build_b(s).isApprox(expect));
}

TEST_CASE("bipartite and blockwise structure") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Matrix bip = build_b(spec_of(ScenarioKind::bipartite, seed));
        CHECK(bip.topLeftCorner(20, 20).isZero());
        CHECK(bip.bottomRightCorner(80, 80).isZero());
        CHECK(bip.isApprox(bip.transpose()));

        const Matrix blk = build_b(spec_of(ScenarioKind::blockwise, seed));
        for (Index i = 0; i < 100; ++i)
            for (Index j = 0; j < 100; ++j)
                if (i >= 30 || j >= 30 || i / 10 != j / 10) CHECK(blk(i, j) == 0.0);
    }
    ScenarioSpec small = spec_of(ScenarioKind::blockwise, 1);
    small.p = 20;
    CHECK_THROWS_AS(build_b(small), InvalidArgument);
}

TEST_CASE("random scenario edge count is binomial") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix b = build_b(spec_of(ScenarioKind::random, seed));
        Index count = 0;
        for (Index i = 0; i < 100; ++i)
            for (Index j = i + 1; j < 100; ++j) count += b(i, j) != 0.0;
        const double mean = 4950 * 0.05;
        const double sd = std::sqrt(4950 * 0.05 * 0.95);
        CHECK(std::abs(static_cast<double>(count) - mean) <= 3.0 * sd);
    }
}

TEST_CASE("delta_for_condition") {
    const Matrix d = Eigen::Vector2d(3, -1).asDiagonal();
    const double delta = delta_for_condition(d, 100.0);
    CHECK(delta == Approx(103.0 / 99.0).epsilon(1e-9));
    CHECK((3 + delta) / (-1 + delta) == Approx(100.0).epsilon(1e-8));
    CHECK_THROWS_AS(delta_for_condition(Matrix::Zero(4, 4), 100.0), DegenerateSpectrum);
    CHECK_THROWS_AS(delta_for_condition(d, 1.0), InvalidArgument);

    const Matrix band = build_b(spec_of(ScenarioKind::band, 1));
    const double db = delta_for_condition(band, 100.0);
    const double cond = condition(band + db * Matrix::Identity(100, 100));
    CHECK(cond >= 99.0);
    CHECK(cond <= 101.0);
}

TEST_CASE("standardize_unit_diagonal") {
    CHECK(standardize_unit_diagonal(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix()).isApprox(Matrix::Identity(2, 2)));
    Matrix m(2, 2);
    m << 4, 2, 2, 4;
    Matrix expect(2, 2);
    expect << 1, 0.5, 0.5, 1;
    CHECK(standardize_unit_diagonal(m).isApprox(expect));
    CHECK(standardize_unit_diagonal(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
    Matrix bad = Matrix::Identity(2, 2);
    bad(1, 1) = 0.0;
    CHECK_THROWS_AS(standardize_unit_diagonal(bad), InvalidArgument);
}

TEST_CASE("problem invariants") {
    const ScenarioSpec s = spec_of(ScenarioKind::two_class, 4);
    const auto prob = make_problem(s);
    CHECK(prob.omega.diagonal().isOnes(1e-12));
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(prob.omega).eigenvalues().minCoeff() > 0.0);
    CHECK(prob.support.size() == 4);
    CHECK((prob.cross_cov.array() == 4.0).count() == 4);
    CHECK((prob.cross_cov.array() == 0.0).count() == 96);
    Vector beta(100);
    for (Index j = 0; j < 100; ++j) {
        double acc = 0.0;
        for (Index i = 0; i < 100; ++i) acc += prob.omega(j, i) * prob.cross_cov(i);
        beta(j) = acc;
    }
    CHECK((beta - prob.beta_true).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((prob.sigma * prob.omega).isApprox(Matrix::Identity(100, 100), 1e-8));
    CHECK(prob.graph == graph_from_precision(prob.omega, 1e-10));

    const auto again = make_problem(s);
    CHECK(again.b == prob.b);
    CHECK(again.delta == prob.delta);
    CHECK(again.beta_true == prob.beta_true);
}

TEST_CASE("support propagation on blockwise problems") {
    const auto prob = make_problem(spec_of(ScenarioKind::blockwise, 2));
    for (Index j = 0; j < 100; ++j) {
        bool touches = prob.cross_cov(j) != 0.0;
        for (Index i : prob.graph.neighbors(j)) touches = touches || prob.cross_cov(i) != 0.0;
        if (!touches) CHECK(prob.beta_true(j) == 0.0);
    }
}

TEST_CASE("sampled designs follow the model") {
    ScenarioSpec s = spec_of(ScenarioKind::random, 3);
    s.p = 5;
    s.random_prob = 0.5;
    const auto prob = make_problem(s, 1, 4.0);
    const auto data = sample_dataset(prob, 50000, 1.0, 17);
    const Matrix centered = data.x.rowwise() - data.x.colwise().mean();
    const Matrix cov = centered.transpose() * centered / (data.n() - 1.0);
    CHECK((cov - prob.sigma).cwiseAbs().maxCoeff() <= 0.03);

    const auto noiseless = sample_dataset(prob, 30, 0.0, 5);
    CHECK((noiseless.y - noiseless.x * prob.beta_true).cwiseAbs().maxCoeff() <= 1e-12);

    const auto a = sample_dataset(prob, 20, 5.0, 99);
    const auto b = sample_dataset(prob, 20, 5.0, 99);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}

TEST_CASE("identity covariance columns have unit variance") {
    ScenarioSpec s = spec_of(ScenarioKind::random, 1);
    s.p = 4;
    s.random_prob = 0.0;
    // Empty B gives a degenerate spectrum, so build the problem by hand.
    SyntheticProblem prob;
    prob.spec = s;
    prob.omega = prob.sigma = Matrix::Identity(4, 4);
    prob.beta_true = Vector::Zero(4);
    const auto data = sample_dataset(prob, 10000, 1.0, 3);
    for (Index j = 0; j < 4; ++j) {
        const double mean = data.x.col(j).mean();
        const double var = (data.x.col(j).array() - mean).square().sum() / (data.n() - 1.0);
        CHECK(var >= 0.95);
        CHECK(var <= 1.05);
    }
}

TEST_CASE("standardize uses training rows only") {
    Dataset d;
    d.x.resize(6, 3);
    d.x << 1, 5, 2, 2, 5, 4, 3, 5, 6, 4, 5, 8, 100, 5, -3, 200, 5, 7;
    d.y = Eigen::Matrix<double, 6, 1>(1, 2, 3, 4, 50, 60);
    const std::vector<Index> train{0, 1, 2, 3};
    const auto s = standardize(d, train);
    REQUIRE(s.standardization);
    CHECK(s.standardization->constant == std::vector<bool>{false, true, false});
    const Matrix xt = take_rows(s.x, train);
    const Vector yt = take_rows(s.y, train);
    for (Index j : {0, 2}) {
        CHECK(xt.col(j).mean() == Approx(0.0).epsilon(1e-12));
        CHECK(std::sqrt(xt.col(j).squaredNorm() / 3.0) == Approx(1.0).epsilon(1e-10));
    }
    CHECK(s.x.col(1).isZero());
    CHECK(std::sqrt(yt.squaredNorm() / 3.0) == Approx(1.0).epsilon(1e-10));
    CHECK(s.x(4, 0) == Approx((100 - 2.5) / std::sqrt(5.0 / 3.0)));

    const auto twice = standardize(Dataset{s.x, s.y, {}}, train);
    CHECK((twice.x - s.x).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("scenario names round-trip") {
    for (auto k : {ScenarioKind::two_class, ScenarioKind::bipartite, ScenarioKind::random, ScenarioKind::blockwise,
                   ScenarioKind::band})
        CHECK(parse_scenario_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_scenario_kind("circle"), InvalidArgument);
}

}
