#pragma once

#include <utility>
#include <vector>

#include "sglig/errors.hpp"

namespace sglig {

using Edge = std::pair<Index, Index>;

/// Node i together with its neighbours, sorted. Regularized latent
/// vectors are supported on exactly these coordinates.
struct Neighborhood {
    Index node = 0;
    std::vector<Index> members;

    Index degree() const noexcept { return static_cast<Index>(members.size()); }
};

/// Simple undirected graph on nodes 0..p-1 stored as sorted adjacency lists.
/// Immutable once built.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(Index p);
    /// Edges may be given in either orientation; duplicates collapse.
    /// Self-loops and out-of-range endpoints are rejected.
    UndirectedGraph(Index p, const std::vector<Edge>& edges);

    static UndirectedGraph complete(Index p);
    static UndirectedGraph path(Index p);

    Index size() const noexcept { return static_cast<Index>(adjacency_.size()); }
    const std::vector<Index>& neighbors(Index i) const;
    bool has_edge(Index i, Index j) const;
    Index edge_count() const noexcept { return edge_count_; }
    /// All edges with i < j, lexicographically sorted.
    std::vector<Edge> edges() const;

    friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

private:
    std::vector<std::vector<Index>> adjacency_;
    Index edge_count_ = 0;
};

Neighborhood neighborhood(const UndirectedGraph& g, Index i);
std::vector<Neighborhood> all_neighborhoods(const UndirectedGraph& g);

/// |N_i| for every node (the node itself is counted).
std::vector<Index> degrees(const UndirectedGraph& g);

/// Edge {i,j} iff |omega_ij| > tol. Throws if omega is not symmetric within tol.
UndirectedGraph graph_from_precision(const Matrix& omega, double tol);

} // namespace sglig
