#include "sglig/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "sglig/numerics.hpp"
#include "sglig/parallel.hpp"

namespace sglig {

namespace {

std::vector<Index> shuffled_rows(Index n, std::uint64_t seed) {
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Index{0});
    Rng rng(seed);
    for (Index k = n - 1; k > 0; --k) {
        const auto pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(k + 1)));
        std::swap(rows[k], rows[pick]);
    }
    return rows;
}

std::vector<Index> sorted(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    return v;
}

double mean_squared_residual(const Matrix& x, const Vector& y, const Vector& beta, double offset = 0.0) {
    if (y.size() == 0) return 0.0;
    return ((y.array() - offset).matrix() - x * beta).squaredNorm() / static_cast<double>(y.size());
}

Index count_nonzero(const Vector& v) { return (v.array().abs() > kNonzeroTol).count(); }

} // namespace

std::vector<Split> make_splits(Index n, const SplitScheme& scheme) {
    std::vector<Split> out;
    if (scheme.kind == SplitKind::fixed_counts) {
        if (scheme.n_train < 1 || scheme.n_val < 0 || scheme.n_test < 0 ||
            scheme.n_train + scheme.n_val + scheme.n_test > n) {
            throw InvalidArgument("split counts exceed the number of rows");
        }
        const auto rows = shuffled_rows(n, scheme.seed);
        auto at = rows.begin();
        Split s;
        s.train = sorted({at, at + scheme.n_train});
        at += scheme.n_train;
        s.val = sorted({at, at + scheme.n_val});
        at += scheme.n_val;
        s.test = sorted({at, at + scheme.n_test});
        out.push_back(std::move(s));
        return out;
    }

    const Index k = scheme.segments;
    if (k < 3) throw InvalidArgument("permutation splits need at least three segments");
    if (n < k) throw InvalidArgument("fewer rows than segments");
    const auto rows = shuffled_rows(n, scheme.seed);
    std::vector<std::vector<Index>> segments(static_cast<std::size_t>(k));
    Index at = 0;
    for (Index s = 0; s < k; ++s) {
        const Index size = n / k + (s < n % k ? 1 : 0);
        segments[s].assign(rows.begin() + at, rows.begin() + at + size);
        at += size;
    }
    for (Index test = 0; test < k; ++test) {
        for (Index val = 0; val < k; ++val) {
            if (val == test) continue;
            Split s;
            s.test = sorted(segments[test]);
            s.val = sorted(segments[val]);
            for (Index t = 0; t < k; ++t)
                if (t != test && t != val) s.train.insert(s.train.end(), segments[t].begin(), segments[t].end());
            s.train = sorted(std::move(s.train));
            out.push_back(std::move(s));
        }
    }
    return out;
}

WeightRule parse_weight_rule(std::string_view name) {
    if (name == "auto" || name == "automatic") return WeightRule::automatic;
    if (name == "inverse_cov") return WeightRule::inverse_cov;
    if (name == "degree_scaled") return WeightRule::degree_scaled;
    throw InvalidArgument("unknown weight rule '" + std::string(name) + "'");
}

Metrics metrics(const Vector& beta_hat, const Vector& beta_true, const Matrix& x_test, const Vector& y_test) {
    if (beta_hat.size() != beta_true.size() || x_test.cols() != beta_hat.size() || x_test.rows() != y_test.size()) {
        throw InvalidArgument("metrics: dimension mismatch");
    }
    Metrics m;
    m.l2_distance = (beta_hat - beta_true).norm();
    m.mse = mean_squared_residual(x_test, y_test, beta_hat);
    m.nonzero = count_nonzero(beta_hat);
    return m;
}

TuningReport tune(const Dataset& data, const UndirectedGraph& graph, ModelKind kind, const Split& split,
                  const TuneOptions& options, const Vector* beta_true) {
    const auto start = std::chrono::steady_clock::now();
    if (graph.size() != data.p()) throw InvalidArgument("tune: graph size differs from the number of predictors");
    if (beta_true && beta_true->size() != data.p()) throw InvalidArgument("tune: beta_true has the wrong length");

    const Dataset std_data = standardize(data, split.train);
    const Standardization& st = *std_data.standardization;

    const Matrix x_train = take_rows(std_data.x, split.train);
    const Vector y_train = take_rows(std_data.y, split.train);
    const Matrix x_val = take_rows(std_data.x, split.val);
    const Vector y_val = take_rows(std_data.y, split.val);

    ModelSpec base;
    base.kind = kind;
    base.groups = all_neighborhoods(graph);
    base.degrees = degrees(graph);
    const bool degree_scaled = options.weights == WeightRule::degree_scaled ||
                               (options.weights == WeightRule::automatic && kind == ModelKind::dsrig);
    base.weights = degree_scaled ? dsrig_weights(x_train, y_train, base.degrees) : srig_weights(x_train, y_train);

    TuningReport report;
    report.kind = kind;
    report.n_train = static_cast<Index>(split.train.size());
    report.n_val = static_cast<Index>(split.val.size());
    report.n_test = static_cast<Index>(split.test.size());

    // lambda_max is defined on the l2-only penalty with the tau_i weights actually used.
    report.lambda_max = lambda_max(x_train, y_train, graph, base.weights, options.radius_factor);
    const Design design(x_train, y_train);
    report.sigma = design.sigma();

    const double lmax = report.lambda_max > 0.0 ? report.lambda_max : 1.0;
    const TuningGrid grid = build_grid(kind, lmax, options.grid);
    report.lambda_max = lmax;
    report.entries.resize(grid.points.size());
    std::vector<Vector> betas(grid.points.size());

    parallel_for(grid.chains.size(), options.threads, [&](std::size_t c) {
        std::optional<Vector> warm;
        for (Index idx : grid.chains[c]) {
            GridEntry& entry = report.entries[idx];
            entry.params = grid.points[idx];
            ModelSpec spec = base;
            spec.params = grid.points[idx];
            try {
                const GroupRadii radii = radii_for(spec, design.sigma(), options.radius_factor);
                FitResult fr = fit(design, radii, options.solver, warm);
                entry.iterations = fr.iterations;
                entry.converged = fr.converged;
                entry.nonzero = count_nonzero(fr.beta);
                entry.val_mse = mean_squared_residual(x_val, y_val, fr.beta);
                warm = fr.beta;
                betas[idx] = std::move(fr.beta);
            } catch (const std::exception& e) {
                entry.error = e.what();
                entry.val_mse = std::numeric_limits<double>::infinity();
                warm.reset();
            }
        }
    });

    // Grid points are ordered from most to least shrinkage, so the first
    // minimiser wins ties.
    for (Index k = 0; k < grid.size(); ++k) {
        if (!report.entries[k].error.empty()) continue;
        if (report.best < 0 || report.entries[k].val_mse < report.entries[report.best].val_mse) report.best = k;
    }
    if (report.best < 0) throw std::runtime_error("tune: every grid point failed");

    report.best_params = report.entries[report.best].params;
    report.val_mse = report.entries[report.best].val_mse;
    report.beta_std = betas[report.best];

    report.beta = Vector::Zero(data.p());
    for (Index j = 0; j < data.p(); ++j) {
        if (!st.constant[j]) report.beta[j] = report.beta_std[j] * st.y_scale / st.x_scale[j];
    }
    report.intercept = st.y_mean - st.x_mean.dot(report.beta);

    const Matrix x_test = take_rows(data.x, split.test);
    const Vector y_test = take_rows(data.y, split.test);
    report.test_mse = mean_squared_residual(x_test, y_test, report.beta, report.intercept);
    report.test_mse_std =
        mean_squared_residual(take_rows(std_data.x, split.test), take_rows(std_data.y, split.test), report.beta_std);
    report.nonzero = count_nonzero(report.beta);
    if (beta_true) report.l2_distance = (report.beta - *beta_true).norm();

    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

double theorem1_bound(double sigma_noise, double sigma_max_star, double d_min, double d_max, double tau_max, double a,
                      double p, double n, double kappa_L) {
    for (double v : {sigma_noise, sigma_max_star, d_min, d_max, tau_max, a, p, n, kappa_L}) {
        if (!(v > 0.0)) throw InvalidArgument("theorem1_bound: all inputs must be positive");
    }
    const double spread = tau_max + std::sqrt(d_max);
    return 36.0 / d_min * sigma_noise * sigma_noise * sigma_max_star * spread * spread * a * (std::log(p) + d_max) /
           (n * kappa_L);
}

double group_sigma_max(const Matrix& x, const UndirectedGraph& graph) {
    double best = 0.0;
    for (Index i = 0; i < graph.size(); ++i) {
        const Neighborhood nb = neighborhood(graph, i);
        Matrix xn(x.rows(), nb.degree());
        for (Index k = 0; k < nb.degree(); ++k) xn.col(k) = x.col(nb.members[k]);
        best = std::max(best, spectral_norm_sym(xn.transpose() * xn).value);
    }
    return best;
}

double restricted_curvature(const Matrix& x, const std::vector<Index>& support) {
    if (support.empty()) throw InvalidArgument("restricted_curvature: empty support");
    Matrix xs(x.rows(), static_cast<Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) xs.col(static_cast<Index>(k)) = x.col(support[k]);
    const Matrix gram = xs.transpose() * xs / static_cast<double>(x.rows());
    return extreme_eigs_sym(gram).min;
}

} // namespace sglig
