#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairaudit/dataset.hpp"
#include "fairaudit/feature_matrix.hpp"

namespace fairaudit {

// One event-rate regressor: logistic regression on a polynomial monomial
// expansion of the design matrix, L2 penalty on everything but the intercept.
struct ResidualModelConfig {
    int degree = 2;               // monomial expansion degree, in [1, 8]
    double l2_strength = 1e-3;    // lambda
    int max_iter = 2000;
    double tol = 1e-6;            // max-norm gradient stop
    double zero_label_weight = 1.0;  // uniform sample weighting
    std::size_t expansion_cap = 20000;  // max expanded columns
};

// All monomials of total degree <= degree over the base columns, deduplicated,
// graded lexicographic order (degree ascending; within a degree, earlier base
// columns dominate). The degree-d plan is a column prefix of any higher-degree
// plan over the same base, and every non-base monomial factors as an earlier
// monomial times one base column, so rows evaluate in one multiply per column.
struct ExpansionPlan {
    static constexpr std::uint32_t kBaseColumn = 0xFFFFFFFFu;

    int degree = 1;
    std::size_t base_columns = 0;
    std::vector<std::string> names;
    std::vector<std::uint32_t> parent;  // kBaseColumn for degree-1 terms
    std::vector<std::uint32_t> factor;  // base column index multiplied in

    static ExpansionPlan build(const std::vector<ColumnMeta>& base, int degree, std::size_t cap);

    std::size_t width() const { return names.size(); }

    // out.size() must be width(); out[0..base) is copied from the row.
    void expand_row(std::span<const double> base_row, std::span<double> out) const;
};

// Materialized expansion of a whole matrix (column count C(p+d, d) - 1).
FeatureMatrix polynomial_expand(const FeatureMatrix& fm, int degree, std::size_t cap = 20000);

// Value-preserving compression of the expansion over a design schema: powers
// of a 0/1 one-hot column equal the column itself and products of distinct
// levels of one categorical attribute are identically zero, so many expanded
// columns coincide on every dataset built from the schema. Solving and
// predicting on the representative columns reproduces the full-width problem
// exactly (duplicate groups share one coefficient with ridge weight 1/m).
// Derived from the schema alone, never from data, so fit and evaluation rows
// reduce identically; one-hot columns must genuinely hold 0/1 values.
struct ReducedExpansion {
    static constexpr std::uint32_t kBaseColumn = 0xFFFFFFFFu;
    static constexpr std::uint32_t kZeroColumn = 0xFFFFFFFEu;

    std::size_t base_columns = 0;
    std::vector<std::uint32_t> parent;        // eval graph over representatives
    std::vector<std::uint32_t> factor;        // base column multiplied in
    std::vector<std::uint32_t> group_of;      // full expanded column -> representative
    std::vector<std::uint32_t> representative;  // representative -> full column index

    static ReducedExpansion build(const std::vector<ColumnMeta>& base, const ExpansionPlan& plan);

    std::size_t width() const { return parent.size(); }
    // Representatives among the first `full_width` expanded columns (a prefix).
    std::size_t prefix_width(std::size_t full_width) const;
    // Duplicate count per representative within the first `full_width` columns.
    std::vector<std::uint32_t> multiplicities(std::size_t full_width) const;
    // Per-representative coefficient sums of a full weight vector (+ intercept).
    std::vector<double> coefficients(std::span<const double> full_weights) const;

    // out.size() >= width(); evaluates every representative monomial.
    void expand_row(std::span<const double> base_row, std::span<double> out) const;
};

struct ResidualModel {
    ResidualModelConfig config;
    std::vector<ColumnMeta> base_schema;  // design schema incl. standardization stats
    std::vector<std::string> feature_names;  // expanded column names
    std::vector<double> weights;          // expanded width + 1, intercept last
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;

    std::size_t expanded_width() const { return weights.empty() ? 0 : weights.size() - 1; }
    double intercept() const { return weights.back(); }
};

// Deterministic full-batch fit: minimizes mean logistic loss plus
// l2_strength/2 * |w|^2 (intercept unpenalized) by limited-memory BFGS with
// Armijo backtracking; stops when the gradient max-norm drops below tol or at
// max_iter. No randomness: identical inputs give bit-identical weights.
ResidualModel fit_klr(const FeatureMatrix& features, std::span<const int> outcomes,
                      const ResidualModelConfig& cfg);

// Penalized objective at the given weights (expanded width + 1, intercept
// last); useful for descent checks and finite-difference validation.
double klr_objective(const FeatureMatrix& features, std::span<const int> outcomes,
                     const ResidualModelConfig& cfg, std::span<const double> weights);

// sigmoid(w . phi(x) + b) per row; `features` must be a base design matrix
// with the model's column schema (standardization already applied).
std::vector<double> predict_event_rate(const ResidualModel& model, const FeatureMatrix& features);

struct ResidualEnsemble {
    std::vector<ResidualModel> members;
    std::vector<ColumnMeta> base_schema;
    DesignSpec design;
};

// The default grid: lambda 1e-3 with degrees 2..5, then lambda 1e-2 with
// degrees 2..5 (members 1..8).
std::vector<ResidualModelConfig> default_residual_grid();

// Fits every member on one shared design matrix built from the dataset
// (attributes + model score + optional embeddings). Members fit in parallel;
// each fit is single-threaded and pure.
ResidualEnsemble fit_ensemble(const AuditDataset& ds, bool include_embeddings,
                              const std::vector<ResidualModelConfig>& configs = default_residual_grid(),
                              std::size_t workers = 0);

// Same, on an already-built design matrix.
ResidualEnsemble fit_ensemble_on(const FeatureMatrix& design, std::span<const int> outcomes,
                                 const std::vector<ResidualModelConfig>& configs,
                                 std::size_t workers = 0);

// JSON round-trip of a fitted member: config, standardization stats, expanded
// feature bookkeeping and weights.
std::string residual_model_to_json(const ResidualModel& model);
ResidualModel residual_model_from_json(std::string_view text);

}  // namespace fairaudit
