#include "fairaudit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/parallel.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

using nlohmann::json;

const char* direction_name(Direction direction) {
    return direction == Direction::Overestimation ? "overestimation" : "underestimation";
}

double shifted_prediction(double score, double delta, Direction direction) {
    if (score < 0.0 || score > 1.0) {
        throw AuditError(ErrorCode::ScoreOutOfRange, "score outside [0,1]");
    }
    double shifted =
        direction == Direction::Underestimation ? score + delta : score - delta;
    return std::clamp(shifted, 0.0, 1.0);
}

std::vector<double> shifted_predictions(std::span<const double> scores, double delta,
                                        Direction direction) {
    std::vector<double> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = shifted_prediction(scores[i], delta, direction);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ensemble prediction helpers
// ---------------------------------------------------------------------------

namespace {

void check_prediction_schema(const ResidualEnsemble& ensemble, const FeatureMatrix& rows) {
    if (ensemble.members.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "ensemble has no members");
    }
    const auto& schema = ensemble.base_schema;
    if (rows.columns.size() != schema.size()) {
        throw AuditError(ErrorCode::SchemaMismatch, "design width differs from fitted schema");
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (rows.columns[c].name != schema[c].name) {
            throw AuditError(ErrorCode::SchemaMismatch, "column mismatch: " + rows.columns[c].name);
        }
    }
}

// Shared expansion over an ensemble: one reduced-monomial evaluation graph at
// the max member degree; every member folds its full weight vector onto the
// representative columns once and predicts with the compressed dot product.
struct EnsemblePredictor {
    ReducedExpansion red;
    std::vector<std::vector<double>> coeffs;  // per member, intercept last

    explicit EnsemblePredictor(const ResidualEnsemble& ensemble) {
        int max_degree = 1;
        std::size_t max_cap = 0;
        for (const auto& m : ensemble.members) {
            max_degree = std::max(max_degree, m.config.degree);
            max_cap = std::max(max_cap, m.config.expansion_cap);
        }
        ExpansionPlan plan = ExpansionPlan::build(ensemble.base_schema, max_degree, max_cap);
        red = ReducedExpansion::build(ensemble.base_schema, plan);
        coeffs.reserve(ensemble.members.size());
        for (const auto& m : ensemble.members) coeffs.push_back(red.coefficients(m.weights));
    }

    std::size_t scratch_width() const { return red.width(); }

    void expand(std::span<const double> base_row, std::span<double> scratch) const {
        red.expand_row(base_row, scratch);
    }

    // Event-rate predictions of every member for one expanded row.
    void predict_expanded(std::span<const double> expanded, std::span<double> out) const {
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            const auto& c = coeffs[k];
            const std::size_t width = c.size() - 1;
            double z = c[width];
            for (std::size_t j = 0; j < width; ++j) z += expanded[j] * c[j];
            out[k] = 1.0 / (1.0 + std::exp(-z));
        }
    }
};

std::vector<std::size_t> group_columns(const std::vector<ColumnMeta>& schema,
                                       const std::string& group) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema[c].group == group) cols.push_back(c);
    }
    return cols;
}

}  // namespace

std::vector<std::vector<double>> residual_scores(const ResidualEnsemble& ensemble,
                                                 const FeatureMatrix& rows,
                                                 std::span<const double> shifted) {
    check_prediction_schema(ensemble, rows);
    if (shifted.size() != rows.rows) {
        throw AuditError(ErrorCode::InvalidArgument, "shifted scores not aligned with rows");
    }
    EnsemblePredictor predictor(ensemble);
    const std::size_t K = ensemble.members.size();
    std::vector<std::vector<double>> ghat(K, std::vector<double>(rows.rows));
    std::vector<double> expanded(predictor.scratch_width());
    std::vector<double> preds(K);
    for (std::size_t i = 0; i < rows.rows; ++i) {
        predictor.expand(rows.row(i), expanded);
        predictor.predict_expanded(expanded, preds);
        for (std::size_t k = 0; k < K; ++k) ghat[k][i] = preds[k] - shifted[i];
    }
    return ghat;
}

CusumResult cusum_statistic(std::span<const int> outcomes, std::span<const double> shifted,
                            const std::vector<std::vector<double>>& ghat, Direction direction) {
    const std::size_t n2 = shifted.size();
    if (n2 == 0) {
        throw AuditError(ErrorCode::EmptyEvaluationSet, "no evaluation rows");
    }
    if (outcomes.size() != n2) {
        throw AuditError(ErrorCode::InvalidArgument, "outcomes not aligned with shifted scores");
    }
    if (ghat.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "no residual members");
    }

    CusumResult result;
    result.trajectories.reserve(ghat.size());
    result.max_stat = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ghat.size(); ++k) {
        if (ghat[k].size() != n2) {
            throw AuditError(ErrorCode::InvalidArgument, "residual list not aligned");
        }
        CusumTrajectory traj;
        traj.member_id = static_cast<int>(k) + 1;
        traj.partial_sums.reserve(n2);
        double running = 0.0;
        for (std::size_t i = 0; i < n2; ++i) {
            const double g = ghat[k][i];
            const bool counted =
                direction == Direction::Underestimation ? g > 0.0 : g < 0.0;
            if (counted) {
                running += (static_cast<double>(outcomes[i]) - shifted[i]) * g;
            }
            traj.partial_sums.push_back(running);
        }
        traj.final_stat = running / static_cast<double>(n2);
        result.max_stat = std::max(result.max_stat, traj.final_stat);
        result.trajectories.push_back(std::move(traj));
    }
    return result;
}

double monte_carlo_pvalue(double observed, std::span<const double> null_statistics) {
    if (null_statistics.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "need at least one null statistic");
    }
    std::size_t count = 0;
    for (double t : null_statistics) {
        if (t >= observed) ++count;
    }
    return static_cast<double>(count + 1) / static_cast<double>(null_statistics.size() + 1);
}

std::vector<double> simulate_null(std::span<const double> shifted,
                                  const std::vector<std::vector<double>>& ghat,
                                  Direction direction, int replicates, std::uint64_t seed,
                                  std::size_t workers) {
    const std::size_t n2 = shifted.size();
    if (n2 == 0) {
        throw AuditError(ErrorCode::EmptyEvaluationSet, "no evaluation rows");
    }
    if (replicates < 1) {
        throw AuditError(ErrorCode::InvalidArgument, "replicates must be >= 1");
    }
    const std::size_t K = ghat.size();

    // Indicator-filtered coefficients; the replicate sum is computed term by
    // term so degenerate Bernoulli draws cancel exactly.
    std::vector<std::vector<double>> coef(K, std::vector<double>(n2, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < n2; ++i) {
            const double g = ghat[k][i];
            const bool counted =
                direction == Direction::Underestimation ? g > 0.0 : g < 0.0;
            if (counted) coef[k][i] = g;
        }
    }

    std::vector<double> stats(static_cast<std::size_t>(replicates));
    parallel_for(stats.size(), workers, [&](std::size_t b) {
        RandomStream stream(derive_stream_key(seed, "mc-null", b));
        std::vector<double> member_sum(K, 0.0);
        for (std::size_t i = 0; i < n2; ++i) {
            const double residual =
                (stream.next_bernoulli(shifted[i]) ? 1.0 : 0.0) - shifted[i];
            for (std::size_t k = 0; k < K; ++k) member_sum[k] += residual * coef[k][i];
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            best = std::max(best, member_sum[k] / static_cast<double>(n2));
        }
        stats[b] = best;
    });
    return stats;
}

// ---------------------------------------------------------------------------
// Variable importance
// ---------------------------------------------------------------------------

namespace {

// Max statistic over members, with one feature group's base values permuted.
// `value_at(i, c)` supplies the unpermuted base value of row i, column c.
template <typename ValueAt, typename PredictRow>
double permuted_max_stat(std::size_t n_rows, std::size_t n_cols, std::size_t n_members,
                         const std::vector<std::size_t>& permuted_cols,
                         const std::vector<std::size_t>& permutation, const ValueAt& value_at,
                         PredictRow& predict_row, std::span<const int> outcomes,
                         std::span<const double> shifted, Direction direction) {
    std::vector<double> base_row(n_cols);
    std::vector<double> preds(n_members);
    std::vector<double> sums(n_members, 0.0);
    std::vector<bool> is_permuted(n_cols, false);
    for (std::size_t c : permuted_cols) is_permuted[c] = true;

    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            base_row[c] = value_at(is_permuted[c] ? permutation[i] : i, c);
        }
        predict_row(i, base_row, preds);
        const double y_minus_s = static_cast<double>(outcomes[i]) - shifted[i];
        for (std::size_t k = 0; k < n_members; ++k) {
            const double g = preds[k] - shifted[i];
            const bool counted =
                direction == Direction::Underestimation ? g > 0.0 : g < 0.0;
            if (counted) sums[k] += y_minus_s * g;
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_members; ++k) {
        best = std::max(best, sums[k] / static_cast<double>(n_rows));
    }
    return best;
}

std::vector<VariableImportance> rank_importances(
    const std::vector<std::string>& groups, const std::vector<double>& observed_minus_mean) {
    std::vector<VariableImportance> ranking(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        ranking[g] = {groups[g], observed_minus_mean[g]};
    }
    std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        if (a.importance != b.importance) return a.importance > b.importance;
        return a.feature < b.feature;
    });
    return ranking;
}

}  // namespace

std::vector<VariableImportance> compute_variable_importance(
    const ResidualEnsemble& ensemble, const FeatureMatrix& eval_base,
    std::span<const int> outcomes, std::span<const double> shifted, Direction direction,
    int permutations, std::uint64_t seed, std::size_t workers) {
    check_prediction_schema(ensemble, eval_base);
    if (permutations < 1) {
        throw AuditError(ErrorCode::InvalidArgument, "permutations must be >= 1");
    }
    const std::size_t n_rows = eval_base.rows;
    const std::size_t n_cols = eval_base.width();
    const std::size_t K = ensemble.members.size();

    EnsemblePredictor predictor(ensemble);
    std::vector<double> expanded(predictor.scratch_width());

    auto value_at = [&](std::size_t i, std::size_t c) { return eval_base.at(i, c); };

    // Observed statistic (identity permutation path, same arithmetic).
    std::vector<std::size_t> identity(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) identity[i] = i;

    const std::vector<std::string> groups = feature_groups(ensemble.base_schema);
    std::vector<std::vector<std::size_t>> cols_of_group;
    cols_of_group.reserve(groups.size());
    for (const auto& g : groups) cols_of_group.push_back(group_columns(ensemble.base_schema, g));

    auto make_predict_row = [&]() {
        return [&, scratch = std::vector<double>(predictor.scratch_width())](
                   std::size_t, const std::vector<double>& base_row,
                   std::vector<double>& preds) mutable {
            predictor.expand(base_row, scratch);
            predictor.predict_expanded(scratch, preds);
        };
    };

    auto observed_predict = make_predict_row();
    const double observed =
        permuted_max_stat(n_rows, n_cols, K, {}, identity, value_at, observed_predict, outcomes,
                          shifted, direction);

    const std::size_t R = static_cast<std::size_t>(permutations);
    std::vector<double> permuted_stats(groups.size() * R, 0.0);
    parallel_for(groups.size() * R, workers, [&](std::size_t task) {
        const std::size_t g = task / R;
        const std::size_t r = task % R;
        RandomStream stream(derive_stream_key(seed, "vi:" + groups[g], r));
        std::vector<std::size_t> permutation = shuffled_indices(n_rows, stream);
        auto predict_row = make_predict_row();
        permuted_stats[task] =
            permuted_max_stat(n_rows, n_cols, K, cols_of_group[g], permutation, value_at,
                              predict_row, outcomes, shifted, direction);
    });

    std::vector<double> importances(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double mean = 0.0;
        for (std::size_t r = 0; r < R; ++r) mean += permuted_stats[g * R + r];
        mean /= static_cast<double>(R);
        importances[g] = observed - mean;
    }
    return rank_importances(groups, importances);
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

namespace {

void validate_audit_config(const CalibrationConfig& cfg) {
    if (!(cfg.delta >= 0.0 && cfg.delta < 1.0)) {
        throw AuditError(ErrorCode::InvalidArgument, "delta must be in [0,1)");
    }
    if (cfg.mc_replicates < 100) {
        throw AuditError(ErrorCode::InvalidArgument, "mc_replicates must be >= 100");
    }
    if (cfg.vi_permutations < 10) {
        throw AuditError(ErrorCode::InvalidArgument, "vi_permutations must be >= 10");
    }
}

AuditDataset subset(const AuditDataset& ds, std::span<const std::size_t> rows) {
    AuditDataset out;
    out.attribute_schema = ds.attribute_schema;
    out.embedding_length = ds.embedding_length;
    out.provenance = ds.provenance;
    out.records.reserve(rows.size());
    for (std::size_t i : rows) out.records.push_back(ds.records[i]);
    return out;
}

std::vector<ResidualModelConfig> resolve_grid(const CalibrationConfig& cfg) {
    return cfg.configs.empty() ? default_residual_grid() : cfg.configs;
}

CalibrationVerdict finish_verdict(Direction direction, CusumResult&& cusum,
                                  std::vector<double>&& nulls,
                                  std::vector<VariableImportance>&& vi) {
    CalibrationVerdict verdict;
    verdict.direction = direction;
    verdict.max_stat = cusum.max_stat;
    verdict.member_stats.reserve(cusum.trajectories.size());
    for (const auto& t : cusum.trajectories) verdict.member_stats.push_back(t.final_stat);
    verdict.trajectories = std::move(cusum.trajectories);
    verdict.p_value = monte_carlo_pvalue(verdict.max_stat, nulls);
    verdict.reject = verdict.p_value < 0.05;
    verdict.vi_ranking = std::move(vi);
    return verdict;
}

}  // namespace

CalibrationVerdict run_split_audit(const AuditDataset& ds, const CalibrationConfig& cfg,
                                   std::size_t workers) {
    validate_audit_config(cfg);
    const auto* split = std::get_if<SplitVariant>(&cfg.variant);
    if (!split) {
        throw AuditError(ErrorCode::InvalidArgument, "config variant is not Split");
    }
    if (!(split->n1_fraction > 0.0 && split->n1_fraction < 1.0)) {
        throw AuditError(ErrorCode::InvalidArgument, "n1_fraction must be in (0,1)");
    }
    const std::size_t n = ds.size();
    const std::size_t n1 = static_cast<std::size_t>(static_cast<double>(n) * split->n1_fraction);
    if (n1 < 2 || n - n1 < 1) {
        throw AuditError(ErrorCode::SplitTooSmall,
                         "split " + std::to_string(n1) + "/" + std::to_string(n - n1));
    }

    RandomStream shuffle_stream(derive_stream_key(cfg.seed, "split-shuffle", 0));
    std::vector<std::size_t> order = shuffled_indices(n, shuffle_stream);
    std::span<const std::size_t> fit_rows(order.data(), n1);
    std::span<const std::size_t> eval_rows(order.data() + n1, n - n1);

    AuditDataset fit_ds = subset(ds, fit_rows);
    AuditDataset eval_ds = subset(ds, eval_rows);

    ResidualEnsemble ensemble =
        fit_ensemble(fit_ds, cfg.include_embeddings, resolve_grid(cfg), workers);
    FeatureMatrix eval_base = design_matrix(eval_ds, ensemble.design, &ensemble.base_schema);

    std::vector<double> shifted = shifted_predictions(eval_ds.scores(), cfg.delta, cfg.direction);
    std::vector<int> outcomes = eval_ds.outcomes();
    std::vector<std::vector<double>> ghat = residual_scores(ensemble, eval_base, shifted);

    CusumResult cusum = cusum_statistic(outcomes, shifted, ghat, cfg.direction);
    std::vector<double> nulls =
        simulate_null(shifted, ghat, cfg.direction, cfg.mc_replicates, cfg.seed, workers);
    std::vector<VariableImportance> vi =
        compute_variable_importance(ensemble, eval_base, outcomes, shifted, cfg.direction,
                                    cfg.vi_permutations, cfg.seed, workers);
    return finish_verdict(cfg.direction, std::move(cusum), std::move(nulls), std::move(vi));
}

std::vector<int> cv_fold_assignment(std::size_t n, int folds, std::uint64_t seed) {
    if (folds < 2) {
        throw AuditError(ErrorCode::InvalidArgument, "folds must be >= 2");
    }
    RandomStream stream(derive_stream_key(seed, "cv-folds", 0));
    std::vector<std::size_t> order = shuffled_indices(n, stream);
    std::vector<int> fold_of(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
        fold_of[order[t]] = static_cast<int>(t % static_cast<std::size_t>(folds));
    }
    return fold_of;
}

CalibrationVerdict run_cv_audit(const AuditDataset& ds, const CalibrationConfig& cfg,
                                std::size_t workers) {
    validate_audit_config(cfg);
    const auto* cv = std::get_if<CvVariant>(&cfg.variant);
    if (!cv) {
        throw AuditError(ErrorCode::InvalidArgument, "config variant is not CVScore");
    }
    const int folds = cv->folds;
    const std::size_t n = ds.size();
    if (n < static_cast<std::size_t>(folds)) {
        throw AuditError(ErrorCode::FoldDegenerate, "fewer rows than folds");
    }

    std::vector<int> fold_of = cv_fold_assignment(n, folds, cfg.seed);
    std::vector<ResidualModelConfig> grid = resolve_grid(cfg);
    const std::size_t K = grid.size();

    std::vector<double> shifted = shifted_predictions(ds.scores(), cfg.delta, cfg.direction);
    std::vector<int> outcomes = ds.outcomes();

    std::vector<std::vector<double>> ghat(K, std::vector<double>(n, 0.0));
    std::vector<ResidualEnsemble> fold_ensembles(static_cast<std::size_t>(folds));
    std::vector<FeatureMatrix> fold_full_bases(static_cast<std::size_t>(folds));

    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < n; ++i) {
            (fold_of[i] == f ? test_rows : train_rows).push_back(i);
        }
        if (test_rows.empty()) {
            throw AuditError(ErrorCode::FoldDegenerate, "fold " + std::to_string(f) + " is empty");
        }
        bool has_pos = false, has_neg = false;
        for (std::size_t i : train_rows) {
            (ds.records[i].outcome == 1 ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) {
            throw AuditError(ErrorCode::FoldDegenerate,
                             "training complement of fold " + std::to_string(f) + " is single-class");
        }

        AuditDataset train_ds = subset(ds, train_rows);
        ResidualEnsemble ens = fit_ensemble(train_ds, cfg.include_embeddings, grid, workers);

        // Transform the full dataset with this fold's stats once: held-out
        // predictions read their own rows, VI reads permuted rows.
        FeatureMatrix full_base = design_matrix(ds, ens.design, &ens.base_schema);

        EnsemblePredictor predictor(ens);
        std::vector<double> expanded(predictor.scratch_width());
        std::vector<double> preds(K);
        for (std::size_t i : test_rows) {
            predictor.expand(full_base.row(i), expanded);
            predictor.predict_expanded(expanded, preds);
            for (std::size_t k = 0; k < K; ++k) ghat[k][i] = preds[k] - shifted[i];
        }

        fold_ensembles[static_cast<std::size_t>(f)] = std::move(ens);
        fold_full_bases[static_cast<std::size_t>(f)] = std::move(full_base);
    }

    CusumResult cusum = cusum_statistic(outcomes, shifted, ghat, cfg.direction);
    std::vector<double> nulls =
        simulate_null(shifted, ghat, cfg.direction, cfg.mc_replicates, cfg.seed, workers);

    // Held-out VI: permute base values across all rows; each row keeps its
    // fold's standardization and fold model.
    const std::vector<std::string> groups = feature_groups(fold_ensembles[0].base_schema);
    std::vector<std::vector<std::size_t>> cols_of_group;
    cols_of_group.reserve(groups.size());
    for (const auto& g : groups) {
        cols_of_group.push_back(group_columns(fold_ensembles[0].base_schema, g));
    }
    const std::size_t n_cols = fold_ensembles[0].base_schema.size();

    std::vector<EnsemblePredictor> predictors;
    predictors.reserve(fold_ensembles.size());
    for (const auto& ens : fold_ensembles) predictors.emplace_back(ens);

    auto make_cv_predict = [&]() {
        return [&, scratch = std::vector<double>(predictors[0].scratch_width())](
                   std::size_t row, const std::vector<double>& base_row,
                   std::vector<double>& preds) mutable {
            const std::size_t f = static_cast<std::size_t>(fold_of[row]);
            predictors[f].expand(base_row, scratch);
            predictors[f].predict_expanded(scratch, preds);
        };
    };

    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = i;

    const std::size_t R = static_cast<std::size_t>(cfg.vi_permutations);
    std::vector<double> permuted_stats(groups.size() * R, 0.0);

    // Row i standardized with fold_of[i]'s stats, source row per permutation.
    auto stat_with_permutation = [&](const std::vector<std::size_t>& permutation,
                                     const std::vector<std::size_t>& permuted_cols) {
        std::vector<bool> is_permuted(n_cols, false);
        for (std::size_t c : permuted_cols) is_permuted[c] = true;
        std::vector<double> base_row(n_cols);
        std::vector<double> preds(K);
        std::vector<double> sums(K, 0.0);
        auto predict_row = make_cv_predict();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t f = static_cast<std::size_t>(fold_of[i]);
            for (std::size_t c = 0; c < n_cols; ++c) {
                const std::size_t src = is_permuted[c] ? permutation[i] : i;
                base_row[c] = fold_full_bases[f].at(src, c);
            }
            predict_row(i, base_row, preds);
            const double y_minus_s = static_cast<double>(outcomes[i]) - shifted[i];
            for (std::size_t k = 0; k < K; ++k) {
                const double g = preds[k] - shifted[i];
                const bool counted =
                    cfg.direction == Direction::Underestimation ? g > 0.0 : g < 0.0;
                if (counted) sums[k] += y_minus_s * g;
            }
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            best = std::max(best, sums[k] / static_cast<double>(n));
        }
        return best;
    };

    const double observed = stat_with_permutation(identity, {});
    parallel_for(groups.size() * R, workers, [&](std::size_t task) {
        const std::size_t g = task / R;
        const std::size_t r = task % R;
        RandomStream stream(derive_stream_key(cfg.seed, "vi:" + groups[g], r));
        std::vector<std::size_t> permutation = shuffled_indices(n, stream);
        permuted_stats[task] = stat_with_permutation(permutation, cols_of_group[g]);
    });

    std::vector<double> importances(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double mean = 0.0;
        for (std::size_t r = 0; r < R; ++r) mean += permuted_stats[g * R + r];
        mean /= static_cast<double>(R);
        importances[g] = observed - mean;
    }
    std::vector<VariableImportance> vi = rank_importances(groups, importances);
    return finish_verdict(cfg.direction, std::move(cusum), std::move(nulls), std::move(vi));
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string verdict_to_json(const CalibrationVerdict& verdict) {
    json doc;
    doc["direction"] = direction_name(verdict.direction);
    doc["max_stat"] = verdict.max_stat;
    doc["p_value"] = verdict.p_value;
    doc["reject"] = verdict.reject;
    doc["member_stats"] = verdict.member_stats;
    json vi = json::array();
    for (const auto& item : verdict.vi_ranking) {
        vi.push_back({{"feature", item.feature}, {"importance", item.importance}});
    }
    doc["vi_ranking"] = vi;
    return doc.dump(2) + "\n";
}

std::string trajectories_to_csv(const std::vector<CusumTrajectory>& trajectories) {
    std::ostringstream out;
    out << "row_index,member_id,cumulative_score\n";
    for (const auto& traj : trajectories) {
        for (std::size_t i = 0; i < traj.partial_sums.size(); ++i) {
            out << i << ',' << traj.member_id << ',' << format_double(traj.partial_sums[i])
                << '\n';
        }
    }
    return out.str();
}

}  // namespace fairaudit
