#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sglig/models.hpp"
#include "sglig/solver.hpp"
#include "sglig/synth.hpp"

namespace sglig {

enum class SplitKind { fixed_counts, permutation_segments };

struct SplitScheme {
    SplitKind kind = SplitKind::fixed_counts;
    Index n_train = 80;
    Index n_val = 80;
    Index n_test = 400;
    Index segments = 10;
    std::uint64_t seed = 1;

    static SplitScheme fixed(Index train, Index val, Index test, std::uint64_t seed) {
        return {SplitKind::fixed_counts, train, val, test, 10, seed};
    }
    static SplitScheme permutations(Index segments, std::uint64_t seed) {
        return {SplitKind::permutation_segments, 0, 0, 0, segments, seed};
    }
};

struct Split {
    std::vector<Index> train;
    std::vector<Index> val;
    std::vector<Index> test;
};

/// fixed_counts: one shuffled split. permutation_segments: rows shuffled and
/// cut into near-equal segments; one split per ordered (test, validation)
/// segment pair with the remaining segments as training rows.
std::vector<Split> make_splits(Index n, const SplitScheme& scheme);

enum class WeightRule {
    automatic,      ///< inverse_cov for srig/sglig, degree_scaled for dsrig
    inverse_cov,
    degree_scaled,
};

WeightRule parse_weight_rule(std::string_view name);

struct TuneOptions {
    GridConfig grid;
    SolverConfig solver;
    double radius_factor = 2.0;
    WeightRule weights = WeightRule::automatic;
    unsigned threads = 1;
};

struct GridEntry {
    ModelParams params;
    double val_mse = 0.0;
    Index iterations = 0;
    bool converged = false;
    Index nonzero = 0;
    std::string error;   ///< empty unless the fit failed (val_mse is then +inf)
};

struct Metrics {
    double l2_distance = 0.0;
    double mse = 0.0;
    Index nonzero = 0;
};

struct TuningReport {
    ModelKind kind = ModelKind::srig;
    double lambda_max = 0.0;
    double sigma = 0.0;
    std::vector<GridEntry> entries;
    Index best = -1;
    ModelParams best_params;
    Vector beta_std;      ///< coefficients on the standardized scale
    Vector beta;          ///< coefficients on the original scale
    double intercept = 0.0;
    double val_mse = 0.0;
    double test_mse = 0.0;       ///< original y scale
    double test_mse_std = 0.0;   ///< standardized y scale
    std::optional<double> l2_distance;
    Index nonzero = 0;
    double wall_time = 0.0;
    Index n_train = 0;
    Index n_val = 0;
    Index n_test = 0;
};

/// Nonzero threshold used by the metrics.
inline constexpr double kNonzeroTol = 1e-8;

Metrics metrics(const Vector& beta_hat, const Vector& beta_true, const Matrix& x_test, const Vector& y_test);

/// Grid search by validation MSE. Standardization statistics come from the
/// training rows; each chain of the grid is fitted with warm starts.
TuningReport tune(const Dataset& data, const UndirectedGraph& graph, ModelKind kind, const Split& split,
                  const TuneOptions& options, const Vector* beta_true = nullptr);

/// Finite-sample error bound diagnostic:
///   (36 / d_min) sigma^2 sigma*_max (tau_max + sqrt(d_max))^2 a (log p + d_max) / (n kappa_L).
double theorem1_bound(double sigma_noise, double sigma_max_star, double d_min, double d_max, double tau_max, double a,
                      double p, double n, double kappa_L);

/// max over neighbourhoods of the top eigenvalue of X_N^T X_N.
double group_sigma_max(const Matrix& x, const UndirectedGraph& graph);

/// Smallest eigenvalue of X_S^T X_S / n over the support columns S.
double restricted_curvature(const Matrix& x, const std::vector<Index>& support);

} // namespace sglig
