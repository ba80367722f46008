#pragma once

#include <limits>
#include <span>
#include <vector>

#include "sglig/graph.hpp"

namespace sglig {

/// Radius value meaning "this ball constraint is absent".
inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

/// Per-group radii of the dual feasible set
///   K = { b : ||b_{N_i}||_2 <= tau_star[i] and ||b_{N_i}||_inf <= xi_star[i] for all i }.
struct GroupRadii {
    std::vector<Neighborhood> groups;
    std::vector<double> tau_star;
    std::vector<double> xi_star;

    Index group_count() const noexcept { return static_cast<Index>(groups.size()); }
    void validate() const;
};

enum class ProjectionMethod { two_stage_pocs, dykstra };

struct ProjectorKind {
    ProjectionMethod method = ProjectionMethod::two_stage_pocs;
    double tol = 1e-8;
    Index max_iter = 200;

    static ProjectorKind pocs(double tol = 1e-8, Index max_cycles = 200) {
        return {ProjectionMethod::two_stage_pocs, tol, max_cycles};
    }
    static ProjectorKind dykstra(double tol = 1e-10, Index max_iter = 20'000) {
        return {ProjectionMethod::dykstra, tol, max_iter};
    }
};

const char* to_string(ProjectionMethod method);
ProjectionMethod parse_projection_method(std::string_view name);

/// Coordinatewise clip to [-xi, xi].
Vector project_linf(const Vector& v, double xi);
/// Radial scaling onto the l2 ball of radius tau.
Vector project_l2(const Vector& v, double tau);
/// l-inf clip followed by l2 scaling; always lands in both balls.
Vector project_group_two_stage(const Vector& v, double tau, double xi);

/// In-place two-stage projection of the coordinates `members` of x.
void project_group_two_stage_inplace(Vector& x, std::span<const Index> members, double tau, double xi);

/// Exact Euclidean projection onto {||x||_2 <= tau} and {||x||_inf <= xi}.
Vector project_group_exact(const Vector& v, double tau, double xi);
void project_group_exact_inplace(Vector& x, std::span<const Index> members, double tau, double xi);

/// Groups whose restriction of h reaches either radius (ties count as active).
/// All-zero restrictions are never active since projection leaves them fixed.
std::vector<Index> active_groups(const Vector& h, const GroupRadii& radii);

/// Largest violation of any listed group's constraints, 0 when feasible.
double infeasibility(const Vector& x, const GroupRadii& radii, std::span<const Index> groups);

/// Point of K restricted to the `active` groups, computed by cyclic two-stage
/// projections, or exactly by the averaged (parallel) Dykstra-like iteration
/// over exact per-group projections.
/// Coordinates outside every active group are returned unchanged.
Vector project_intersection(const Vector& h, const GroupRadii& radii, std::span<const Index> active,
                            const ProjectorKind& projector);

struct ProxResult {
    Vector beta;
    Vector dual;   ///< h - beta: the projection, zero on coordinates no group covers
    std::vector<Index> active;
};

/// Proximal map of the latent doubly sparse penalty by Moreau decomposition,
/// beta = h - P_K(h), with K reduced to the active groups. Coordinates not
/// covered by any group are unpenalized.
ProxResult prox_regularizer(const Vector& h, const GroupRadii& radii, const ProjectorKind& projector);

} // namespace sglig
