#include "fairaudit/residual.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fairaudit/parallel.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Expansion plan
// ---------------------------------------------------------------------------

ExpansionPlan ExpansionPlan::build(const std::vector<ColumnMeta>& base, int degree,
                                   std::size_t cap) {
    if (degree < 1 || degree > 8) {
        throw AuditError(ErrorCode::InvalidArgument, "expansion degree must be in [1,8]");
    }
    if (base.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "expansion needs at least one base column");
    }
    ExpansionPlan plan;
    plan.degree = degree;
    plan.base_columns = base.size();

    const std::size_t p = base.size();
    auto ensure_capacity = [&](std::size_t next) {
        if (next > cap) {
            throw AuditError(ErrorCode::DimensionBlowup,
                             "expansion exceeds " + std::to_string(cap) + " columns");
        }
    };

    // Degree-1 block: the base columns themselves.
    std::vector<std::uint32_t> first_factor;  // leading base index per monomial
    for (std::size_t c = 0; c < p; ++c) {
        ensure_capacity(plan.names.size() + 1);
        plan.names.push_back(base[c].name);
        plan.parent.push_back(kBaseColumn);
        plan.factor.push_back(static_cast<std::uint32_t>(c));
        first_factor.push_back(static_cast<std::uint32_t>(c));
    }

    std::size_t prev_begin = 0;
    std::size_t prev_end = plan.names.size();
    for (int d = 2; d <= degree; ++d) {
        std::size_t begin = plan.names.size();
        // Children (c, parent) with c <= leading index of the parent keep the
        // index tuple sorted; iterating c ascending over the parent suffix
        // whose leading index >= c emits graded lexicographic order.
        std::size_t suffix = prev_begin;
        for (std::size_t c = 0; c < p; ++c) {
            while (suffix < prev_end && first_factor[suffix] < c) ++suffix;
            for (std::size_t j = suffix; j < prev_end; ++j) {
                ensure_capacity(plan.names.size() + 1);
                plan.names.push_back(base[c].name + "*" + plan.names[j]);
                plan.parent.push_back(static_cast<std::uint32_t>(j));
                plan.factor.push_back(static_cast<std::uint32_t>(c));
                first_factor.push_back(static_cast<std::uint32_t>(c));
            }
        }
        prev_begin = begin;
        prev_end = plan.names.size();
    }
    return plan;
}

void ExpansionPlan::expand_row(std::span<const double> base_row, std::span<double> out) const {
    const std::size_t p = base_columns;
    for (std::size_t j = 0; j < p; ++j) out[j] = base_row[j];
    const std::size_t total = names.size();
    for (std::size_t j = p; j < total; ++j) {
        out[j] = out[parent[j]] * base_row[factor[j]];
    }
}

FeatureMatrix polynomial_expand(const FeatureMatrix& fm, int degree, std::size_t cap) {
    ExpansionPlan plan = ExpansionPlan::build(fm.columns, degree, cap);
    FeatureMatrix out;
    out.rows = fm.rows;
    out.columns.reserve(plan.width());
    for (std::size_t j = 0; j < plan.width(); ++j) {
        ColumnMeta meta;
        meta.name = plan.names[j];
        meta.group = j < fm.columns.size() ? fm.columns[j].group : plan.names[j];
        meta.origin = j < fm.columns.size() ? fm.columns[j].origin : ColumnOrigin::StandardizedNumeric;
        out.columns.push_back(std::move(meta));
    }
    out.values.resize(out.rows * plan.width());
    for (std::size_t r = 0; r < fm.rows; ++r) {
        plan.expand_row(fm.row(r), out.row(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reduced expansion
// ---------------------------------------------------------------------------

ReducedExpansion ReducedExpansion::build(const std::vector<ColumnMeta>& base,
                                         const ExpansionPlan& plan) {
    const std::size_t p = plan.base_columns;
    const std::size_t width = plan.width();

    // Categorical attribute id per one-hot base column.
    std::vector<int> attr_of(p, -1);
    std::vector<std::string> attrs;
    for (std::size_t c = 0; c < p; ++c) {
        if (base[c].origin != ColumnOrigin::OneHotLevel) continue;
        auto it = std::find(attrs.begin(), attrs.end(), base[c].group);
        if (it == attrs.end()) {
            attr_of[c] = static_cast<int>(attrs.size());
            attrs.push_back(base[c].group);
        } else {
            attr_of[c] = static_cast<int>(it - attrs.begin());
        }
    }

    ReducedExpansion red;
    red.base_columns = p;
    red.group_of.assign(width, kZeroColumn);

    std::vector<std::vector<std::uint8_t>> exponents(width);
    std::map<std::vector<std::uint8_t>, std::uint32_t> groups;

    // Clamps one-hot exponents to 1; a product of two different levels of one
    // attribute is identically zero.
    auto reduce_key = [&](std::vector<std::uint8_t> key, bool& zero) {
        zero = false;
        std::uint64_t seen_mask = 0;
        for (std::size_t c = 0; c < p; ++c) {
            if (key[c] == 0 || attr_of[c] < 0) continue;
            key[c] = 1;
            const int a = attr_of[c];
            if (a < 64) {
                const std::uint64_t bit = 1ULL << a;
                if (seen_mask & bit) {
                    zero = true;
                    break;
                }
                seen_mask |= bit;
            } else {
                for (std::size_t c2 = 0; c2 < c && !zero; ++c2) {
                    if (key[c2] != 0 && attr_of[c2] == a) zero = true;
                }
                if (zero) break;
            }
        }
        return key;
    };

    for (std::size_t j = 0; j < width; ++j) {
        std::vector<std::uint8_t> e;
        if (plan.parent[j] == ExpansionPlan::kBaseColumn) {
            e.assign(p, 0);
            e[plan.factor[j]] = 1;
        } else {
            e = exponents[plan.parent[j]];
            ++e[plan.factor[j]];
        }
        exponents[j] = e;

        bool zero = false;
        std::vector<std::uint8_t> key = reduce_key(std::move(e), zero);
        if (zero) continue;  // group_of stays kZeroColumn

        auto it = groups.find(key);
        if (it != groups.end()) {
            red.group_of[j] = it->second;
            continue;
        }

        // First occurrence of this key is always its pure monomial: clamping
        // strictly lowers the degree, so a clamped preimage would have hit an
        // earlier block.
        std::uint32_t group = static_cast<std::uint32_t>(red.representative.size());
        red.group_of[j] = group;
        red.representative.push_back(static_cast<std::uint32_t>(j));

        std::size_t lead = 0;
        while (key[lead] == 0) ++lead;
        std::size_t total = 0;
        for (std::uint8_t v : key) total += v;
        if (total == 1) {
            red.parent.push_back(kBaseColumn);
        } else {
            std::vector<std::uint8_t> parent_key = key;
            --parent_key[lead];
            auto pit = groups.find(parent_key);
            if (pit == groups.end()) {
                throw AuditError(ErrorCode::InvalidArgument, "expansion reduction parent missing");
            }
            red.parent.push_back(pit->second);
        }
        red.factor.push_back(static_cast<std::uint32_t>(lead));
        groups.emplace(std::move(key), group);
    }
    return red;
}

std::size_t ReducedExpansion::prefix_width(std::size_t full_width) const {
    std::size_t count = 0;
    while (count < representative.size() && representative[count] < full_width) ++count;
    return count;
}

std::vector<std::uint32_t> ReducedExpansion::multiplicities(std::size_t full_width) const {
    std::vector<std::uint32_t> mult(prefix_width(full_width), 0);
    for (std::size_t j = 0; j < full_width; ++j) {
        if (group_of[j] != kZeroColumn) ++mult[group_of[j]];
    }
    return mult;
}

std::vector<double> ReducedExpansion::coefficients(std::span<const double> full_weights) const {
    const std::size_t full_width = full_weights.size() - 1;
    const std::size_t reduced = prefix_width(full_width);
    std::vector<double> coeffs(reduced + 1, 0.0);
    for (std::size_t j = 0; j < full_width; ++j) {
        if (group_of[j] != kZeroColumn) coeffs[group_of[j]] += full_weights[j];
    }
    coeffs[reduced] = full_weights[full_width];
    return coeffs;
}

void ReducedExpansion::expand_row(std::span<const double> base_row, std::span<double> out) const {
    const std::size_t total = parent.size();
    for (std::size_t g = 0; g < total; ++g) {
        out[g] = parent[g] == kBaseColumn ? base_row[factor[g]]
                                          : out[parent[g]] * base_row[factor[g]];
    }
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

namespace {

struct SolverProblem {
    const double* x = nullptr;  // n rows, row_stride apart, first p columns used
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t row_stride = 0;
    const int* y = nullptr;
    double lambda = 0.0;
    double zero_label_weight = 1.0;
    const double* ridge_scale = nullptr;  // per-column penalty multiplier, 1.0 when null

    // Penalized objective; gradient accumulated into *grad when non-null.
    double eval(const std::vector<double>& theta, std::vector<double>* grad) const {
        const double b = theta[p];
        double loss = 0.0;
        double weight_total = 0.0;
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = x + i * row_stride;
            double z = b;
            for (std::size_t j = 0; j < p; ++j) z += row[j] * theta[j];
            const double yi = static_cast<double>(y[i]);
            const double wi = y[i] == 0 ? zero_label_weight : 1.0;
            weight_total += wi;
            double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
            loss += wi * (softplus - yi * z);
            if (grad) {
                double mu = 1.0 / (1.0 + std::exp(-z));
                double r = wi * (mu - yi);
                double* g = grad->data();
                for (std::size_t j = 0; j < p; ++j) g[j] += r * row[j];
                g[p] += r;
            }
        }
        const double inv_w = 1.0 / weight_total;
        loss *= inv_w;
        double penalty = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double scale = ridge_scale ? ridge_scale[j] : 1.0;
            penalty += scale * theta[j] * theta[j];
        }
        loss += 0.5 * lambda * penalty;
        if (grad) {
            for (std::size_t j = 0; j < p; ++j) {
                const double scale = ridge_scale ? ridge_scale[j] : 1.0;
                (*grad)[j] = (*grad)[j] * inv_w + lambda * scale * theta[j];
            }
            (*grad)[p] *= inv_w;
        }
        return loss;
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct FitResult {
    std::vector<double> theta;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
};

// Limited-memory BFGS with Armijo backtracking, zero start. Fully sequential,
// so identical inputs reproduce bit-identical weights.
FitResult lbfgs_fit(const SolverProblem& prob, int max_iter, double tol) {
    constexpr std::size_t kMemory = 10;
    constexpr double kArmijo = 1e-4;
    const std::size_t dim = prob.p + 1;

    FitResult result;
    std::vector<double> theta(dim, 0.0);
    std::vector<double> grad(dim, 0.0), trial(dim), trial_grad(dim), direction(dim);
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    double f = prob.eval(theta, &grad);
    double gnorm = max_abs(grad);
    int iter = 0;
    while (gnorm > tol && iter < max_iter) {
        // Two-loop recursion for d = -H g.
        direction = grad;
        const std::size_t hist = s_hist.size();
        std::vector<double> alpha(hist, 0.0);
        for (std::size_t k = hist; k-- > 0;) {
            alpha[k] = rho_hist[k] * dot(s_hist[k], direction);
            for (std::size_t j = 0; j < dim; ++j) direction[j] -= alpha[k] * y_hist[k][j];
        }
        if (hist > 0) {
            double yy = dot(y_hist[hist - 1], y_hist[hist - 1]);
            double gamma = yy > 0.0 ? dot(s_hist[hist - 1], y_hist[hist - 1]) / yy : 1.0;
            for (double& v : direction) v *= gamma;
        }
        for (std::size_t k = 0; k < hist; ++k) {
            double beta = rho_hist[k] * dot(y_hist[k], direction);
            for (std::size_t j = 0; j < dim; ++j) direction[j] += (alpha[k] - beta) * s_hist[k][j];
        }
        for (double& v : direction) v = -v;

        double dir_deriv = dot(grad, direction);
        if (!(dir_deriv < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t j = 0; j < dim; ++j) direction[j] = -grad[j];
            dir_deriv = -dot(grad, grad);
        }

        double step = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (std::size_t j = 0; j < dim; ++j) trial[j] = theta[j] + step * direction[j];
            f_new = prob.eval(trial, &trial_grad);
            if (f_new <= f + kArmijo * step * dir_deriv) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step collapsed to numerical floor

        std::vector<double> s(dim), yk(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            s[j] = trial[j] - theta[j];
            yk[j] = trial_grad[j] - grad[j];
        }
        double sy = dot(s, yk);
        if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(yk, yk))) {
            if (s_hist.size() == kMemory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yk));
            rho_hist.push_back(1.0 / sy);
        }
        theta.swap(trial);
        grad.swap(trial_grad);
        f = f_new;
        gnorm = max_abs(grad);
        ++iter;
    }

    result.theta = std::move(theta);
    result.converged = gnorm <= tol;
    result.iterations = iter;
    result.gradient_norm = gnorm;
    return result;
}

void validate_fit_inputs(const FeatureMatrix& features, std::span<const int> outcomes,
                         const ResidualModelConfig& cfg) {
    if (features.rows != outcomes.size()) {
        throw AuditError(ErrorCode::InvalidArgument, "features and outcomes differ in length");
    }
    if (features.rows < 2) {
        throw AuditError(ErrorCode::InvalidArgument, "fit needs at least 2 rows");
    }
    if (!(cfg.l2_strength > 0.0)) {
        throw AuditError(ErrorCode::InvalidArgument, "l2_strength must be positive");
    }
    bool has_pos = false, has_neg = false;
    for (int y : outcomes) {
        if (y == 1) has_pos = true;
        else if (y == 0) has_neg = true;
        else throw AuditError(ErrorCode::InvalidArgument, "outcomes must be 0 or 1");
    }
    if (!has_pos || !has_neg) {
        throw AuditError(ErrorCode::SingleClassTarget, "both outcome classes required");
    }
    for (double v : features.values) {
        if (!std::isfinite(v)) {
            throw AuditError(ErrorCode::NonFiniteFeature, "design matrix contains non-finite value");
        }
    }
}

ResidualModel make_model(const ResidualModelConfig& cfg, const std::vector<ColumnMeta>& base_schema,
                         const ExpansionPlan& plan, std::size_t width, FitResult&& fit) {
    ResidualModel model;
    model.config = cfg;
    model.base_schema = base_schema;
    model.feature_names.assign(plan.names.begin(), plan.names.begin() + width);
    model.weights = std::move(fit.theta);
    model.converged = fit.converged;
    model.iterations = fit.iterations;
    model.gradient_norm = fit.gradient_norm;
    return model;
}

}  // namespace

namespace {

// Fits one member on its prefix of the shared reduced design. The reduced
// matrix is stored at `stride` representatives per row; the member reads the
// first prefix_width(full_width) of them. Returns full-width weights: every
// duplicate receives coefficient / multiplicity, which is the exact minimizer
// of the unreduced problem.
FitResult fit_member(const ReducedExpansion& red, const double* reduced_matrix, std::size_t rows,
                     std::size_t stride, std::size_t full_width, std::span<const int> outcomes,
                     const ResidualModelConfig& cfg) {
    const std::size_t reduced_width = red.prefix_width(full_width);
    std::vector<std::uint32_t> mult = red.multiplicities(full_width);
    std::vector<double> ridge(reduced_width);
    for (std::size_t g = 0; g < reduced_width; ++g) {
        ridge[g] = 1.0 / static_cast<double>(mult[g]);
    }

    SolverProblem prob;
    prob.x = reduced_matrix;
    prob.n = rows;
    prob.p = reduced_width;
    prob.row_stride = stride;
    prob.y = outcomes.data();
    prob.lambda = cfg.l2_strength;
    prob.zero_label_weight = cfg.zero_label_weight;
    prob.ridge_scale = ridge.data();

    FitResult fit = lbfgs_fit(prob, cfg.max_iter, cfg.tol);

    std::vector<double> full(full_width + 1, 0.0);
    for (std::size_t j = 0; j < full_width; ++j) {
        const std::uint32_t group = red.group_of[j];
        if (group == ReducedExpansion::kZeroColumn) continue;
        full[j] = fit.theta[group] / static_cast<double>(mult[group]);
    }
    full[full_width] = fit.theta[reduced_width];
    fit.theta = std::move(full);
    return fit;
}

void validate_one_hot_columns(const FeatureMatrix& features) {
    for (std::size_t c = 0; c < features.columns.size(); ++c) {
        if (features.columns[c].origin != ColumnOrigin::OneHotLevel) continue;
        for (std::size_t r = 0; r < features.rows; ++r) {
            const double v = features.at(r, c);
            if (v != 0.0 && v != 1.0) {
                throw AuditError(ErrorCode::InvalidArgument,
                                 "one-hot column " + features.columns[c].name +
                                     " holds non-binary values");
            }
        }
    }
}

}  // namespace

ResidualModel fit_klr(const FeatureMatrix& features, std::span<const int> outcomes,
                      const ResidualModelConfig& cfg) {
    validate_fit_inputs(features, outcomes, cfg);
    validate_one_hot_columns(features);
    ExpansionPlan plan = ExpansionPlan::build(features.columns, cfg.degree, cfg.expansion_cap);
    ReducedExpansion red = ReducedExpansion::build(features.columns, plan);

    const std::size_t stride = red.width();
    std::vector<double> reduced(features.rows * stride);
    for (std::size_t r = 0; r < features.rows; ++r) {
        red.expand_row(features.row(r), {reduced.data() + r * stride, stride});
    }

    FitResult fit =
        fit_member(red, reduced.data(), features.rows, stride, plan.width(), outcomes, cfg);
    return make_model(cfg, features.columns, plan, plan.width(), std::move(fit));
}

double klr_objective(const FeatureMatrix& features, std::span<const int> outcomes,
                     const ResidualModelConfig& cfg, std::span<const double> weights) {
    ExpansionPlan plan = ExpansionPlan::build(features.columns, cfg.degree, cfg.expansion_cap);
    const std::size_t width = plan.width();
    if (weights.size() != width + 1) {
        throw AuditError(ErrorCode::InvalidArgument, "weight vector must have expanded width + 1");
    }
    std::vector<double> expanded(features.rows * width);
    for (std::size_t r = 0; r < features.rows; ++r) {
        plan.expand_row(features.row(r), {expanded.data() + r * width, width});
    }
    SolverProblem prob;
    prob.x = expanded.data();
    prob.n = features.rows;
    prob.p = width;
    prob.row_stride = width;
    prob.y = outcomes.data();
    prob.lambda = cfg.l2_strength;
    prob.zero_label_weight = cfg.zero_label_weight;
    std::vector<double> theta(weights.begin(), weights.end());
    return prob.eval(theta, nullptr);
}

std::vector<double> predict_event_rate(const ResidualModel& model, const FeatureMatrix& features) {
    if (features.columns.size() != model.base_schema.size()) {
        throw AuditError(ErrorCode::SchemaMismatch, "design width differs from fitted schema");
    }
    for (std::size_t c = 0; c < features.columns.size(); ++c) {
        if (features.columns[c].name != model.base_schema[c].name) {
            throw AuditError(ErrorCode::SchemaMismatch,
                             "column " + std::to_string(c) + " is " + features.columns[c].name +
                                 ", fitted schema has " + model.base_schema[c].name);
        }
    }
    ExpansionPlan plan =
        ExpansionPlan::build(model.base_schema, model.config.degree, model.config.expansion_cap);
    ReducedExpansion red = ReducedExpansion::build(model.base_schema, plan);
    std::vector<double> coeffs = red.coefficients(model.weights);
    const std::size_t reduced_width = coeffs.size() - 1;

    std::vector<double> scratch(red.width());
    std::vector<double> out(features.rows);
    for (std::size_t r = 0; r < features.rows; ++r) {
        red.expand_row(features.row(r), scratch);
        double z = coeffs[reduced_width];
        for (std::size_t j = 0; j < reduced_width; ++j) z += scratch[j] * coeffs[j];
        out[r] = 1.0 / (1.0 + std::exp(-z));
    }
    return out;
}

std::vector<ResidualModelConfig> default_residual_grid() {
    std::vector<ResidualModelConfig> grid;
    for (double lambda : {1e-3, 1e-2}) {
        for (int degree : {2, 3, 4, 5}) {
            ResidualModelConfig cfg;
            cfg.degree = degree;
            cfg.l2_strength = lambda;
            grid.push_back(cfg);
        }
    }
    return grid;
}

ResidualEnsemble fit_ensemble_on(const FeatureMatrix& design, std::span<const int> outcomes,
                                 const std::vector<ResidualModelConfig>& configs,
                                 std::size_t workers) {
    if (configs.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "ensemble needs at least one config");
    }
    for (const auto& cfg : configs) validate_fit_inputs(design, outcomes, cfg);

    int max_degree = 1;
    std::size_t max_cap = 0;
    for (const auto& cfg : configs) {
        max_degree = std::max(max_degree, cfg.degree);
        max_cap = std::max(max_cap, cfg.expansion_cap);
    }
    ExpansionPlan plan = ExpansionPlan::build(design.columns, max_degree, max_cap);

    // Width of each member's prefix; the graded order makes any lower-degree
    // plan a prefix of the shared one.
    std::vector<std::size_t> widths(configs.size());
    for (std::size_t m = 0; m < configs.size(); ++m) {
        ExpansionPlan member_plan =
            ExpansionPlan::build(design.columns, configs[m].degree, configs[m].expansion_cap);
        widths[m] = member_plan.width();
    }

    validate_one_hot_columns(design);
    ReducedExpansion red = ReducedExpansion::build(design.columns, plan);
    const std::size_t stride = red.width();
    std::vector<double> reduced(design.rows * stride);
    for (std::size_t r = 0; r < design.rows; ++r) {
        red.expand_row(design.row(r), {reduced.data() + r * stride, stride});
    }

    ResidualEnsemble ens;
    ens.base_schema = design.columns;
    ens.members.resize(configs.size());
    parallel_for(configs.size(), workers, [&](std::size_t m) {
        FitResult fit = fit_member(red, reduced.data(), design.rows, stride, widths[m], outcomes,
                                   configs[m]);
        ens.members[m] = make_model(configs[m], design.columns, plan, widths[m], std::move(fit));
    });
    return ens;
}

ResidualEnsemble fit_ensemble(const AuditDataset& ds, bool include_embeddings,
                              const std::vector<ResidualModelConfig>& configs,
                              std::size_t workers) {
    DesignSpec include;
    include.attributes = true;
    include.score = true;
    include.embeddings = include_embeddings;
    FeatureMatrix design = design_matrix(ds, include);
    std::vector<int> outcomes = ds.outcomes();
    ResidualEnsemble ens = fit_ensemble_on(design, outcomes, configs, workers);
    ens.design = include;
    return ens;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

const char* origin_name(ColumnOrigin origin) {
    switch (origin) {
        case ColumnOrigin::OneHotLevel: return "one_hot_level";
        case ColumnOrigin::StandardizedNumeric: return "standardized_numeric";
        case ColumnOrigin::EmbeddingDim: return "embedding_dim";
        case ColumnOrigin::ModelScore: return "model_score";
    }
    return "unknown";
}

ColumnOrigin origin_from_name(const std::string& name) {
    if (name == "one_hot_level") return ColumnOrigin::OneHotLevel;
    if (name == "standardized_numeric") return ColumnOrigin::StandardizedNumeric;
    if (name == "embedding_dim") return ColumnOrigin::EmbeddingDim;
    if (name == "model_score") return ColumnOrigin::ModelScore;
    throw AuditError(ErrorCode::InvalidSpec, "unknown column origin: " + name);
}

}  // namespace

std::string residual_model_to_json(const ResidualModel& model) {
    json doc;
    doc["config"] = {{"degree", model.config.degree},
                     {"l2_strength", model.config.l2_strength},
                     {"max_iter", model.config.max_iter},
                     {"tol", model.config.tol},
                     {"zero_label_weight", model.config.zero_label_weight},
                     {"expansion_cap", model.config.expansion_cap}};
    json stats = json::array();
    for (const auto& meta : model.base_schema) {
        stats.push_back({{"name", meta.name},
                         {"group", meta.group},
                         {"origin", origin_name(meta.origin)},
                         {"level", meta.level},
                         {"constant", meta.constant},
                         {"mean", meta.mean},
                         {"stdev", meta.stdev}});
    }
    doc["fit_stats"] = stats;
    doc["feature_meta"] = {{"expanded_names", model.feature_names}};
    doc["weights"] = model.weights;
    doc["converged"] = model.converged;
    doc["iterations"] = model.iterations;
    doc["gradient_norm"] = model.gradient_norm;
    return doc.dump(2) + "\n";
}

ResidualModel residual_model_from_json(std::string_view text) {
    json doc = json::parse(text);
    ResidualModel model;
    const json& cfg = doc.at("config");
    model.config.degree = cfg.at("degree").get<int>();
    model.config.l2_strength = cfg.at("l2_strength").get<double>();
    model.config.max_iter = cfg.at("max_iter").get<int>();
    model.config.tol = cfg.at("tol").get<double>();
    model.config.zero_label_weight = cfg.at("zero_label_weight").get<double>();
    model.config.expansion_cap = cfg.at("expansion_cap").get<std::size_t>();
    for (const auto& item : doc.at("fit_stats")) {
        ColumnMeta meta;
        meta.name = item.at("name").get<std::string>();
        meta.group = item.at("group").get<std::string>();
        meta.origin = origin_from_name(item.at("origin").get<std::string>());
        meta.level = item.at("level").get<std::string>();
        meta.constant = item.at("constant").get<bool>();
        meta.mean = item.at("mean").get<double>();
        meta.stdev = item.at("stdev").get<double>();
        model.base_schema.push_back(std::move(meta));
    }
    model.feature_names = doc.at("feature_meta").at("expanded_names").get<std::vector<std::string>>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.converged = doc.at("converged").get<bool>();
    model.iterations = doc.at("iterations").get<int>();
    model.gradient_norm = doc.at("gradient_norm").get<double>();
    return model;
}

}  // namespace fairaudit
