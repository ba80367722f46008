#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sglig/graph.hpp"

namespace sglig {

enum class SymmetrizationRule { or_rule, and_rule };

SymmetrizationRule parse_rule(std::string_view name);

struct MbConfig {
    double lambda = 0.5;
    SymmetrizationRule rule = SymmetrizationRule::or_rule;
    double cd_tol = 1e-7;
    Index cd_max_sweeps = 1000;
    unsigned threads = 1;
};

struct LassoResult {
    Vector coef;
    Index sweeps = 0;
    std::vector<double> objective_trace;  ///< objective after each sweep
};

/// Per-node failure in neighbourhood selection.
class NodeFailure : public ConvergenceError {
public:
    NodeFailure(Index node, const ConvergenceError& cause)
        : ConvergenceError("node " + std::to_string(node) + ": " + cause.what(), cause.last_iterate(),
                           cause.residual()),
          node_(node) {}
    Index node() const noexcept { return node_; }

private:
    Index node_;
};

/// sign(z) * max(|z| - gamma, 0)
inline double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

double lasso_objective(const Matrix& a, const Vector& b, const Vector& w, double lambda);

/// Cyclic coordinate descent for (1/2n)||b - A w||^2 + lambda ||w||_1.
/// Stops when the largest coordinate change of a sweep drops below cd_tol.
LassoResult lasso_cd(const Matrix& a, const Vector& b, double lambda, const MbConfig& config = {});

/// Neighbourhood selection: regress each column on the others and join
/// nodes with nonzero coefficients under the configured rule.
UndirectedGraph mb_estimate(const Matrix& x, const MbConfig& config = {});

struct EdgeCounts {
    Index p = 0;
    Index total = 0;
    std::map<Edge, Index> counts;  ///< keys have i < j
};

struct ConsensusResult {
    EdgeCounts counts;
    UndirectedGraph graph;
};

/// Keeps edges present in strictly more than `threshold` of the graphs.
ConsensusResult consensus(const std::vector<UndirectedGraph>& graphs, Index threshold);

} // namespace sglig
