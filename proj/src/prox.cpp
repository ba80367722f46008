#include "sglig/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace sglig {

namespace {

struct DisjointSets {
    explicit DisjointSets(Index n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index{0});
    }
    Index find(Index a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<Index> parent;
};

/// Active groups partitioned into coordinate-disjoint components; order of
/// first appearance is kept both across and within components.
struct Component {
    std::vector<Index> groups;
    std::vector<Index> coords;
};

std::vector<Component> split_components(const GroupRadii& radii, std::span<const Index> active, Index p) {
    DisjointSets sets(p);
    for (Index g : active) {
        const auto& m = radii.groups[g].members;
        for (std::size_t k = 1; k < m.size(); ++k) sets.unite(m[0], m[k]);
    }
    std::vector<Component> comps;
    std::vector<Index> slot(static_cast<std::size_t>(p), -1);
    std::vector<char> seen(static_cast<std::size_t>(p), 0);
    for (Index g : active) {
        const auto& m = radii.groups[g].members;
        if (m.empty()) continue;
        const Index root = sets.find(m[0]);
        if (slot[root] < 0) {
            slot[root] = static_cast<Index>(comps.size());
            comps.emplace_back();
        }
        Component& c = comps[slot[root]];
        c.groups.push_back(g);
        for (Index j : m) {
            if (!seen[j]) {
                seen[j] = 1;
                c.coords.push_back(j);
            }
        }
    }
    return comps;
}

double group_violation(const Vector& x, const Neighborhood& nb, double tau, double xi) {
    double sq = 0.0;
    double mx = 0.0;
    for (Index j : nb.members) {
        sq += x[j] * x[j];
        mx = std::max(mx, std::abs(x[j]));
    }
    return std::max({0.0, std::sqrt(sq) - tau, mx - xi});
}

double component_violation(const Vector& x, const GroupRadii& radii, const Component& c) {
    double v = 0.0;
    for (Index g : c.groups) v = std::max(v, group_violation(x, radii.groups[g], radii.tau_star[g], radii.xi_star[g]));
    return v;
}

double change_norm(const Vector& x, const std::vector<Index>& coords, const std::vector<double>& before) {
    double sq = 0.0;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const double d = x[coords[k]] - before[k];
        sq += d * d;
    }
    return std::sqrt(sq);
}

void pocs_component(Vector& x, const GroupRadii& radii, const Component& c, const ProjectorKind& proj) {
    std::vector<double> before(c.coords.size());
    double change = 0.0;
    for (Index cycle = 1; cycle <= proj.max_iter; ++cycle) {
        for (std::size_t k = 0; k < c.coords.size(); ++k) before[k] = x[c.coords[k]];
        for (Index g : c.groups) {
            project_group_two_stage_inplace(x, radii.groups[g].members, radii.tau_star[g], radii.xi_star[g]);
        }
        change = change_norm(x, c.coords, before);
        // The last cycle fixes its final group exactly; earlier groups are
        // feasible to within the cycle change once the sweep stops moving.
        if (change < proj.tol && component_violation(x, radii, c) <= 10.0 * proj.tol) return;
    }
    throw ConvergenceError("two-stage POCS did not converge in " + std::to_string(proj.max_iter) + " cycles", x,
                           component_violation(x, radii, c));
}

void dykstra_component(Vector& x, const GroupRadii& radii, const Component& c, const ProjectorKind& proj) {
    const Index m = static_cast<Index>(c.groups.size());
    const Index q = static_cast<Index>(c.coords.size());
    std::vector<Index> local(static_cast<std::size_t>(x.size()), -1);
    for (Index k = 0; k < q; ++k) local[c.coords[k]] = k;

    std::vector<std::vector<Index>> members(static_cast<std::size_t>(m));
    for (Index s = 0; s < m; ++s) {
        for (Index j : radii.groups[c.groups[s]].members) members[s].push_back(local[j]);
    }

    Vector cur(q);
    for (Index k = 0; k < q; ++k) cur[k] = x[c.coords[k]];
    Matrix z = cur.replicate(1, m);   // z_{i,0} = h for every set
    Matrix projected(q, m);
    const double weight = 1.0 / static_cast<double>(m);
    Vector next(q);

    for (Index it = 1; it <= proj.max_iter; ++it) {
        for (Index s = 0; s < m; ++s) {
            Vector ps = z.col(s);
            const Index g = c.groups[s];
            project_group_exact_inplace(ps, members[s], radii.tau_star[g], radii.xi_star[g]);
            projected.col(s) = ps;
        }
        next = projected.rowwise().sum() * weight;
        // The iterate can stall while the auxiliary z_i still drift, so the
        // z increments (next - p_i) must settle too.
        const Matrix step = next.replicate(1, m) - projected;
        z += step;
        const double change = std::max((next - cur).norm(), step.colwise().norm().maxCoeff());
        cur.swap(next);
        if (change < proj.tol) {
            for (Index k = 0; k < q; ++k) x[c.coords[k]] = cur[k];
            return;
        }
    }
    for (Index k = 0; k < q; ++k) x[c.coords[k]] = cur[k];
    throw ConvergenceError("Dykstra projection did not converge in " + std::to_string(proj.max_iter) + " iterations",
                           x, component_violation(x, radii, c));
}

} // namespace

void GroupRadii::validate() const {
    if (tau_star.size() != groups.size() || xi_star.size() != groups.size()) {
        throw InvalidArgument("group radii: lengths of groups and radii differ");
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!(tau_star[g] >= 0.0) || !(xi_star[g] >= 0.0)) {
            throw InvalidArgument("group radii must be nonnegative (group " + std::to_string(g) + ")");
        }
    }
}

const char* to_string(ProjectionMethod method) {
    return method == ProjectionMethod::dykstra ? "dykstra" : "two_stage_pocs";
}

ProjectionMethod parse_projection_method(std::string_view name) {
    if (name == "two_stage_pocs" || name == "pocs") return ProjectionMethod::two_stage_pocs;
    if (name == "dykstra") return ProjectionMethod::dykstra;
    throw InvalidArgument("unknown projector '" + std::string(name) + "'");
}

Vector project_linf(const Vector& v, double xi) { return v.cwiseMax(-xi).cwiseMin(xi); }

Vector project_l2(const Vector& v, double tau) {
    const double norm = v.norm();
    if (norm <= tau) return v;
    return v * (tau / norm);
}

Vector project_group_two_stage(const Vector& v, double tau, double xi) {
    return project_l2(project_linf(v, xi), tau);
}

void project_group_two_stage_inplace(Vector& x, std::span<const Index> members, double tau, double xi) {
    double sq = 0.0;
    for (Index j : members) {
        const double c = std::clamp(x[j], -xi, xi);
        x[j] = c;
        sq += c * c;
    }
    const double norm = std::sqrt(sq);
    if (norm > tau) {
        const double scale = tau / norm;
        for (Index j : members) x[j] *= scale;
    }
}

void project_group_exact_inplace(Vector& x, std::span<const Index> members, double tau, double xi) {
    // Minimizer is clip(s h, xi) for the largest s in (0, 1] keeping the l2 norm <= tau.
    double sq = 0.0;
    for (Index j : members) {
        const double c = std::clamp(x[j], -xi, xi);
        sq += c * c;
    }
    if (sq <= tau * tau) {
        for (Index j : members) x[j] = std::clamp(x[j], -xi, xi);
        return;
    }
    if (tau == 0.0) {
        for (Index j : members) x[j] = 0.0;
        return;
    }
    std::vector<double> mag;
    mag.reserve(members.size());
    double rest = 0.0;
    for (Index j : members) {
        mag.push_back(std::abs(x[j]));
        rest += x[j] * x[j];
    }
    std::sort(mag.begin(), mag.end(), std::greater<>());
    // k = number of clipped coordinates; norm^2 = k xi^2 + s^2 * rest_k.
    double s = 1.0;
    for (std::size_t k = 0; k <= mag.size(); ++k) {
        if (k > 0) rest -= mag[k - 1] * mag[k - 1];
        const double budget = k == 0 ? tau * tau : tau * tau - static_cast<double>(k) * xi * xi;
        if (budget <= 0.0) break;
        if (rest <= 0.0) continue;
        const double cand = std::sqrt(budget / rest);
        const bool below_next = k == mag.size() || cand * mag[k] <= xi;
        const bool above_prev = k == 0 || cand * mag[k - 1] >= xi;
        if (below_next && above_prev) {
            s = cand;
            break;
        }
    }
    for (Index j : members) x[j] = std::clamp(s * x[j], -xi, xi);
}

Vector project_group_exact(const Vector& v, double tau, double xi) {
    Vector x = v;
    std::vector<Index> all(static_cast<std::size_t>(v.size()));
    std::iota(all.begin(), all.end(), Index{0});
    project_group_exact_inplace(x, all, tau, xi);
    return x;
}

std::vector<Index> active_groups(const Vector& h, const GroupRadii& radii) {
    std::vector<Index> out;
    for (Index g = 0; g < radii.group_count(); ++g) {
        double sq = 0.0;
        double mx = 0.0;
        for (Index j : radii.groups[g].members) {
            sq += h[j] * h[j];
            mx = std::max(mx, std::abs(h[j]));
        }
        if (mx == 0.0) continue;
        if (std::sqrt(sq) >= radii.tau_star[g] || mx >= radii.xi_star[g]) out.push_back(g);
    }
    return out;
}

double infeasibility(const Vector& x, const GroupRadii& radii, std::span<const Index> groups) {
    double v = 0.0;
    for (Index g : groups) v = std::max(v, group_violation(x, radii.groups[g], radii.tau_star[g], radii.xi_star[g]));
    return v;
}

Vector project_intersection(const Vector& h, const GroupRadii& radii, std::span<const Index> active,
                            const ProjectorKind& projector) {
    if (!(projector.tol > 0.0)) throw InvalidArgument("projector tolerance must be positive");
    for (Index g : active) {
        if (g < 0 || g >= radii.group_count()) throw InvalidArgument("active group index out of range");
    }
    Vector x = h;
    for (const Component& c : split_components(radii, active, h.size())) {
        const bool single = c.groups.size() == 1;
        const Index g = c.groups.front();
        if (projector.method == ProjectionMethod::two_stage_pocs) {
            if (single)
                project_group_two_stage_inplace(x, radii.groups[g].members, radii.tau_star[g], radii.xi_star[g]);
            else
                pocs_component(x, radii, c, projector);
        } else {
            if (single)
                project_group_exact_inplace(x, radii.groups[g].members, radii.tau_star[g], radii.xi_star[g]);
            else
                dykstra_component(x, radii, c, projector);
        }
    }
    return x;
}

ProxResult prox_regularizer(const Vector& h, const GroupRadii& radii, const ProjectorKind& projector) {
    ProxResult out;
    out.active = active_groups(h, radii);
    out.dual = project_intersection(h, radii, out.active, projector);

    std::vector<char> covered(static_cast<std::size_t>(h.size()), 0);
    for (const auto& nb : radii.groups)
        for (Index j : nb.members) covered[j] = 1;
    for (Index j = 0; j < h.size(); ++j)
        if (!covered[j]) out.dual[j] = 0.0;

    out.beta = h - out.dual;
    return out;
}

} // namespace sglig
