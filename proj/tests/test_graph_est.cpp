#include "doctest.h"

#include <numeric>

#include "sglig/graph_est.hpp"
#include "sglig/numerics.hpp"
#include "sglig/synth.hpp"

using namespace sglig;
using doctest::Approx;

namespace {

Matrix standardized(const Matrix& x) {
    Dataset d{x, Vector::Zero(x.rows()), {}};
    std::vector<Index> rows(static_cast<std::size_t>(x.rows()));
    std::iota(rows.begin(), rows.end(), Index{0});
    return standardize(d, rows).x;
}

Matrix gaussian(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) x(i, j) = rng.normal();
    return x;
}

} // namespace

TEST_SUITE("graph_est") {

TEST_CASE("soft threshold") {
    CHECK(soft_threshold(1.5, 0.5) == 1.0);
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    CHECK(soft_threshold(-3, 1) == -2.0);
}

TEST_CASE("lasso_cd limits") {
    const Matrix a = Matrix::Identity(4, 4) * 2.0;  // columns with ||A_j||^2 / n = 1
    const Vector b = Eigen::Vector4d(1, -2, 3, 0.5);
    MbConfig cfg;
    CHECK(lasso_cd(a, b, 0.0, cfg).coef.isApprox(b / 2.0));
    CHECK(lasso_cd(Matrix::Identity(4, 4), b, 0.0, cfg).coef.isApprox(b));

    const Matrix x = gaussian(50, 6, 2);
    const Vector y = gaussian(50, 1, 3).col(0);
    const double null_lambda = (x.transpose() * y).cwiseAbs().maxCoeff() / 50.0;
    CHECK(lasso_cd(x, y, null_lambda, cfg).coef.isZero(0.0));
    CHECK_FALSE(lasso_cd(x, y, 0.5 * null_lambda, cfg).coef.isZero(0.0));
}

TEST_CASE("lasso objective never increases across sweeps") {
    const Matrix x = gaussian(80, 10, 5);
    const Vector y = x.col(1) - 0.5 * x.col(4) + gaussian(80, 1, 6).col(0);
    const auto res = lasso_cd(x, y, 0.05);
    REQUIRE(res.objective_trace.size() >= 2);
    for (std::size_t k = 1; k < res.objective_trace.size(); ++k)
        CHECK(res.objective_trace[k] <= res.objective_trace[k - 1] + 1e-12);
    CHECK(res.objective_trace.back() == Approx(lasso_objective(x, y, res.coef, 0.05)));
}

TEST_CASE("lasso reports non-convergence") {
    const Matrix x = gaussian(30, 5, 1);
    const Vector y = gaussian(30, 1, 2).col(0);
    MbConfig cfg;
    cfg.cd_max_sweeps = 1;
    cfg.cd_tol = 1e-300;
    CHECK_THROWS_AS(lasso_cd(x, y, 0.0, cfg), ConvergenceError);
}

TEST_CASE("independent columns give an empty graph") {
    const auto g = mb_estimate(standardized(gaussian(2000, 6, 9)));
    CHECK(g.edge_count() == 0);
}

TEST_CASE("chain recovery") {
    Rng rng(21);
    Matrix x(2000, 3);
    for (Index i = 0; i < 2000; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = 0.8 * x(i, 0) + 0.6 * rng.normal();
        x(i, 2) = 0.8 * x(i, 1) + 0.6 * rng.normal();
    }
    const auto g = mb_estimate(standardized(x));
    CHECK(g == UndirectedGraph::path(3));
}

TEST_CASE("near-duplicate columns are joined") {
    Matrix x = gaussian(500, 4, 17);
    Rng rng(3);
    for (Index i = 0; i < 500; ++i) x(i, 3) = x(i, 1) + 1e-3 * rng.normal();
    const auto g = mb_estimate(standardized(x));
    CHECK(g.has_edge(1, 3));
}

TEST_CASE("and rule is contained in or rule and threads do not change results") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::random;
    spec.p = 30;
    spec.random_prob = 0.15;
    const auto prob = make_problem(spec);
    const auto data = sample_dataset(prob, 200, 1.0, 4);
    const Matrix xs = standardized(data.x);
    MbConfig cfg;
    cfg.lambda = 0.1;
    const auto g_or = mb_estimate(xs, cfg);
    cfg.rule = SymmetrizationRule::and_rule;
    const auto g_and = mb_estimate(xs, cfg);
    CHECK(g_and.edge_count() <= g_or.edge_count());
    for (const auto& [i, j] : g_and.edges()) CHECK(g_or.has_edge(i, j));
    cfg.threads = 4;
    CHECK(mb_estimate(xs, cfg) == g_and);
}

TEST_CASE("consensus") {
    const auto path = UndirectedGraph::path(4);
    std::vector<UndirectedGraph> same(90, path);
    CHECK(consensus(same, 70).graph == path);

    std::vector<UndirectedGraph> mixed;
    for (int k = 0; k < 90; ++k) mixed.push_back(k < 70 ? UndirectedGraph(4, {{0, 1}}) : UndirectedGraph(4));
    const auto res = consensus(mixed, 70);
    CHECK(res.graph.edge_count() == 0);
    CHECK(res.counts.counts.at({0, 1}) == 70);
    CHECK(res.counts.total == 90);

    const std::vector<UndirectedGraph> disjoint{UndirectedGraph(4, {{0, 1}}), UndirectedGraph(4, {{2, 3}})};
    CHECK(consensus(disjoint, 1).graph.edge_count() == 0);

    const std::vector<UndirectedGraph> bad{UndirectedGraph(3), UndirectedGraph(4)};
    CHECK_THROWS_AS(consensus(bad, 0), InvalidArgument);

    std::vector<UndirectedGraph> order{UndirectedGraph(4, {{0, 1}}), path, UndirectedGraph(4, {{1, 3}})};
    const auto forward = consensus(order, 1);
    std::reverse(order.begin(), order.end());
    const auto backward = consensus(order, 1);
    CHECK(forward.graph == backward.graph);
    CHECK(forward.counts.counts == backward.counts.counts);
}

TEST_CASE("rule names") {
    CHECK(parse_rule("or") == SymmetrizationRule::or_rule);
    CHECK(parse_rule("and") == SymmetrizationRule::and_rule);
    CHECK_THROWS_AS(parse_rule("xor"), InvalidArgument);
}

}
