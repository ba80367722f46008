#pragma once

#include <string_view>
#include <vector>

#include "sglig/graph.hpp"
#include "sglig/prox.hpp"

namespace sglig {

enum class ModelKind { srig, dsrig, sglig };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

inline constexpr double kWeightFloor = 1e-2;
inline constexpr double kWeightCap = 1e4;

/// Penalty parameters of one grid point. Only the fields relevant to the
/// model kind are read: srig -> lambda; dsrig -> lambda, xi; sglig -> lambda (= lambda*), alpha.
struct ModelParams {
    double lambda = 0.0;
    double xi = 0.0;
    double alpha = 1.0;
};

struct ModelSpec {
    ModelKind kind = ModelKind::srig;
    ModelParams params;
    std::vector<double> weights;   ///< tau_i per node
    std::vector<Index> degrees;    ///< |N_i| per node
    std::vector<Neighborhood> groups;

    void validate() const;
};

struct GridConfig {
    Index n_lambda = 50;
    Index n_xi = 50;
    Index n_alpha = 50;
    double c = 5.0;
    double xi_max = 5.0;
    double lambda_min_ratio = 0.01;
    double alpha_min = 0.01;
};

/// Grid points listed from most to least shrinkage, split into warm-start
/// chains; chains are independent of each other.
struct TuningGrid {
    ModelKind kind = ModelKind::srig;
    double lambda_max = 0.0;
    std::vector<ModelParams> points;
    std::vector<std::vector<Index>> chains;

    Index size() const noexcept { return static_cast<Index>(points.size()); }
};

/// tau_i = 1 / |cov(X_i, y)| (sample covariance), clamped to [1e-2, 1e4].
std::vector<double> srig_weights(const Matrix& x, const Vector& y);
/// tau_i = sqrt(d_i) / |cov(X_i, y)|, same clamp.
std::vector<double> dsrig_weights(const Matrix& x, const Vector& y, const std::vector<Index>& degrees);

/// Smallest lambda for which the pure-l2 model fits beta = 0:
///   max_i ||X_{N_i}^T y||_2 / (n * tau_i * radius_factor).
double lambda_max(const Matrix& x, const Vector& y, const UndirectedGraph& graph, const std::vector<double>& weights,
                  double radius_factor = 2.0);

TuningGrid build_grid(ModelKind kind, double lambda_max, const GridConfig& config = {});

/// Maps penalty weights to ball radii: radius = radius_factor * weight / sigma.
/// A zero weight beside a positive one removes that ball (unconstrained);
/// zero weights on both balls give radius 0 (no shrinkage).
GroupRadii radii_for(const ModelSpec& spec, double sigma, double radius_factor = 2.0);

} // namespace sglig
