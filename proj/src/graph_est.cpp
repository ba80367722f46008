#include "sglig/graph_est.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sglig/parallel.hpp"

namespace sglig {

SymmetrizationRule parse_rule(std::string_view name) {
    if (name == "or" || name == "or_rule") return SymmetrizationRule::or_rule;
    if (name == "and" || name == "and_rule") return SymmetrizationRule::and_rule;
    throw InvalidArgument("unknown symmetrization rule '" + std::string(name) + "'");
}

double lasso_objective(const Matrix& a, const Vector& b, const Vector& w, double lambda) {
    return 0.5 * (b - a * w).squaredNorm() / static_cast<double>(a.rows()) + lambda * w.lpNorm<1>();
}

LassoResult lasso_cd(const Matrix& a, const Vector& b, double lambda, const MbConfig& config) {
    if (a.rows() != b.size()) throw InvalidArgument("lasso_cd: A and b row counts differ");
    if (!(lambda >= 0.0)) throw InvalidArgument("lasso_cd: lambda must be nonnegative");
    const Index n = a.rows();
    const Index q = a.cols();
    const double inv_n = 1.0 / static_cast<double>(n);

    Vector col_sq(q);
    for (Index j = 0; j < q; ++j) col_sq[j] = a.col(j).squaredNorm() * inv_n;

    LassoResult out;
    out.coef = Vector::Zero(q);
    Vector residual = b;

    for (Index sweep = 1; sweep <= config.cd_max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Index j = 0; j < q; ++j) {
            if (col_sq[j] == 0.0) continue;
            const double old = out.coef[j];
            const double z = a.col(j).dot(residual) * inv_n + col_sq[j] * old;
            const double next = soft_threshold(z, lambda) / col_sq[j];
            if (next != old) {
                residual.noalias() -= (next - old) * a.col(j);
                out.coef[j] = next;
                max_change = std::max(max_change, std::abs(next - old));
            }
        }
        out.sweeps = sweep;
        out.objective_trace.push_back(0.5 * residual.squaredNorm() * inv_n + lambda * out.coef.lpNorm<1>());
        if (max_change < config.cd_tol) return out;
    }
    throw ConvergenceError("lasso_cd: no convergence after " + std::to_string(config.cd_max_sweeps) + " sweeps",
                           out.coef);
}

UndirectedGraph mb_estimate(const Matrix& x, const MbConfig& config) {
    if (!(config.lambda >= 0.0)) throw InvalidArgument("mb_estimate: lambda must be nonnegative");
    const Index p = x.cols();
    std::vector<std::vector<Index>> selected(static_cast<std::size_t>(p));

    parallel_for(static_cast<std::size_t>(p), config.threads, [&](std::size_t node) {
        const Index j = static_cast<Index>(node);
        Matrix others(x.rows(), p - 1);
        if (j > 0) others.leftCols(j) = x.leftCols(j);
        if (j + 1 < p) others.rightCols(p - 1 - j) = x.rightCols(p - 1 - j);
        LassoResult fit;
        try {
            fit = lasso_cd(others, x.col(j), config.lambda, config);
        } catch (const ConvergenceError& e) {
            throw NodeFailure(j, e);
        }
        for (Index k = 0; k < p - 1; ++k) {
            if (fit.coef[k] != 0.0) selected[node].push_back(k < j ? k : k + 1);
        }
    });

    std::vector<Edge> edges;
    for (Index i = 0; i < p; ++i) {
        for (Index j : selected[i]) {
            if (config.rule == SymmetrizationRule::or_rule) {
                edges.emplace_back(i, j);  // duplicates collapse in the graph
            } else if (i < j && std::binary_search(selected[j].begin(), selected[j].end(), i)) {
                edges.emplace_back(i, j);
            }
        }
    }
    return UndirectedGraph(p, edges);
}

ConsensusResult consensus(const std::vector<UndirectedGraph>& graphs, Index threshold) {
    if (graphs.empty()) throw InvalidArgument("consensus: no graphs given");
    if (threshold < 0 || threshold > static_cast<Index>(graphs.size())) {
        throw InvalidArgument("consensus: threshold must lie in [0, number of graphs]");
    }
    ConsensusResult out;
    out.counts.p = graphs.front().size();
    out.counts.total = static_cast<Index>(graphs.size());
    for (const auto& g : graphs) {
        if (g.size() != out.counts.p) throw InvalidArgument("consensus: graphs have different node counts");
        for (const auto& e : g.edges()) ++out.counts.counts[e];
    }
    std::vector<Edge> kept;
    for (const auto& [e, c] : out.counts.counts)
        if (c > threshold) kept.push_back(e);
    out.graph = UndirectedGraph(out.counts.p, kept);
    return out;
}

} // namespace sglig
