#include "sglig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sglig {

namespace {

void check_node(Index p, Index i) {
    if (i < 0 || i >= p) {
        throw InvalidArgument("node index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(p) + ")");
    }
}

} // namespace

UndirectedGraph::UndirectedGraph(Index p) {
    if (p < 0) throw InvalidArgument("graph size must be nonnegative");
    adjacency_.resize(static_cast<std::size_t>(p));
}

UndirectedGraph::UndirectedGraph(Index p, const std::vector<Edge>& edges) : UndirectedGraph(p) {
    for (const auto& [i, j] : edges) {
        check_node(p, i);
        check_node(p, j);
        if (i == j) throw InvalidArgument("self-loop on node " + std::to_string(i));
        adjacency_[i].push_back(j);
        adjacency_[j].push_back(i);
    }
    edge_count_ = 0;
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        edge_count_ += static_cast<Index>(list.size());
    }
    edge_count_ /= 2;
}

UndirectedGraph UndirectedGraph::complete(Index p) {
    std::vector<Edge> e;
    for (Index i = 0; i < p; ++i)
        for (Index j = i + 1; j < p; ++j) e.emplace_back(i, j);
    return UndirectedGraph(p, e);
}

UndirectedGraph UndirectedGraph::path(Index p) {
    std::vector<Edge> e;
    for (Index i = 0; i + 1 < p; ++i) e.emplace_back(i, i + 1);
    return UndirectedGraph(p, e);
}

const std::vector<Index>& UndirectedGraph::neighbors(Index i) const {
    check_node(size(), i);
    return adjacency_[i];
}

bool UndirectedGraph::has_edge(Index i, Index j) const {
    const auto& list = neighbors(i);
    return std::binary_search(list.begin(), list.end(), j);
}

std::vector<Edge> UndirectedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (Index i = 0; i < size(); ++i)
        for (Index j : adjacency_[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

Neighborhood neighborhood(const UndirectedGraph& g, Index i) {
    Neighborhood nb;
    nb.node = i;
    nb.members = g.neighbors(i);
    nb.members.insert(std::lower_bound(nb.members.begin(), nb.members.end(), i), i);
    return nb;
}

std::vector<Neighborhood> all_neighborhoods(const UndirectedGraph& g) {
    std::vector<Neighborhood> out;
    out.reserve(static_cast<std::size_t>(g.size()));
    for (Index i = 0; i < g.size(); ++i) out.push_back(neighborhood(g, i));
    return out;
}

std::vector<Index> degrees(const UndirectedGraph& g) {
    std::vector<Index> d(static_cast<std::size_t>(g.size()));
    for (Index i = 0; i < g.size(); ++i) d[i] = static_cast<Index>(g.neighbors(i).size()) + 1;
    return d;
}

UndirectedGraph graph_from_precision(const Matrix& omega, double tol) {
    if (omega.rows() != omega.cols()) throw InvalidArgument("precision matrix must be square");
    if (tol < 0) throw InvalidArgument("tolerance must be nonnegative");
    const Index p = omega.rows();
    std::vector<Edge> e;
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            if (std::abs(omega(i, j) - omega(j, i)) > tol) {
                throw InvalidArgument("precision matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
            if (std::abs(omega(i, j)) > tol) e.emplace_back(i, j);
        }
    }
    return UndirectedGraph(p, e);
}

} // namespace sglig
