#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairaudit/dataset.hpp"
#include "fairaudit/feature_matrix.hpp"
#include "fairaudit/residual.hpp"

namespace fairaudit {

// Overestimation: predicted risk above the true rate somewhere (detected on
// negative predicted residuals). Underestimation is the mirror.
enum class Direction { Overestimation, Underestimation };

const char* direction_name(Direction direction);

struct SplitVariant {
    double n1_fraction = 0.5;  // share of rows used to fit the residual models
};
struct CvVariant {
    int folds = 5;
};
using AuditVariant = std::variant<SplitVariant, CvVariant>;

struct CalibrationConfig {
    double delta = 0.0;                    // tolerance, in [0, 1)
    Direction direction = Direction::Overestimation;
    AuditVariant variant = SplitVariant{};
    int mc_replicates = 1000;              // B >= 100
    int vi_permutations = 50;              // R >= 10
    std::uint64_t seed = 0;
    std::vector<ResidualModelConfig> configs;  // empty = default 8-member grid
    bool include_embeddings = false;
};

// Cumulative score path of one ensemble member over the evaluation sequence.
// Indicator-filtered rows contribute a zero step, so the path has one entry
// per evaluation row; final_stat is the last partial sum divided by the
// evaluation count.
struct CusumTrajectory {
    int member_id = 0;  // 1-based
    std::vector<double> partial_sums;
    double final_stat = 0.0;
};

struct VariableImportance {
    std::string feature;
    double importance = 0.0;  // observed max stat minus mean permuted max stat
};

struct CalibrationVerdict {
    Direction direction = Direction::Overestimation;
    double max_stat = 0.0;
    std::vector<CusumTrajectory> trajectories;
    std::vector<double> member_stats;  // final stat per member, member order
    double p_value = 1.0;
    bool reject = false;               // p_value < 0.05
    std::vector<VariableImportance> vi_ranking;  // importance descending
};

// Tolerance-shifted prediction, clipped to [0,1]. Underestimation tests shift
// the prediction up by delta, overestimation tests shift it down.
double shifted_prediction(double score, double delta, Direction direction);
std::vector<double> shifted_predictions(std::span<const double> scores, double delta,
                                        Direction direction);

// Predicted residuals per member: event-rate prediction minus shifted score.
std::vector<std::vector<double>> residual_scores(const ResidualEnsemble& ensemble,
                                                 const FeatureMatrix& rows,
                                                 std::span<const double> shifted);

struct CusumResult {
    std::vector<CusumTrajectory> trajectories;
    double max_stat = 0.0;
};

// Indicator-filtered cumulative score: per member, sum of
// (outcome - shifted) * residual over rows where the residual is positive
// (underestimation) or negative (overestimation), divided by the evaluation
// count; the reported statistic is the max over members.
CusumResult cusum_statistic(std::span<const int> outcomes, std::span<const double> shifted,
                            const std::vector<std::vector<double>>& ghat, Direction direction);

// (#{null >= observed} + 1) / (B + 1); the add-one correction keeps the
// smallest reportable p at 1/(B+1).
double monte_carlo_pvalue(double observed, std::span<const double> null_statistics);

// Draws replicate outcomes from Bernoulli(shifted) — perfect calibration —
// and recomputes the max statistic with the fitted residuals held fixed.
// Replicate streams are pre-assigned from the seed, so any parallel schedule
// returns the same values in the same order.
std::vector<double> simulate_null(std::span<const double> shifted,
                                  const std::vector<std::vector<double>>& ghat,
                                  Direction direction, int replicates, std::uint64_t seed,
                                  std::size_t workers = 0);

// Permutation importance of each feature group (one-hot blocks move jointly,
// embedding dims and the score column individually): observed max stat minus
// the mean over R recomputations with that group's values permuted across
// evaluation rows. Output sorted by importance descending, ties broken by
// feature name.
std::vector<VariableImportance> compute_variable_importance(
    const ResidualEnsemble& ensemble, const FeatureMatrix& eval_base,
    std::span<const int> outcomes, std::span<const double> shifted, Direction direction,
    int permutations, std::uint64_t seed, std::size_t workers = 0);

// Split audit: seeded shuffle, first n1 rows fit the ensemble, the rest carry
// the statistic; Monte Carlo p-value and VI ranking attached.
CalibrationVerdict run_split_audit(const AuditDataset& ds, const CalibrationConfig& cfg,
                                   std::size_t workers = 0);

// Cross-validated audit: every row is scored by the ensemble fitted on its
// fold complement; per-member statistic is the total indicator-filtered sum
// over all rows divided by n.
CalibrationVerdict run_cv_audit(const AuditDataset& ds, const CalibrationConfig& cfg,
                                std::size_t workers = 0);

// Balanced seeded fold assignment (values in [0, folds)).
std::vector<int> cv_fold_assignment(std::size_t n, int folds, std::uint64_t seed);

std::string verdict_to_json(const CalibrationVerdict& verdict);

// CSV with header row_index,member_id,cumulative_score (member-major).
std::string trajectories_to_csv(const std::vector<CusumTrajectory>& trajectories);

}  // namespace fairaudit
