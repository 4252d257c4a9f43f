#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairaudit/calibration.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/roc.hpp"

namespace fairaudit {

enum class SignificanceBand { None, Marginal, Significant };

// Significant below 0.05, marginal in [0.05, 0.1], none above.
SignificanceBand significance_band(double p_value);
const char* band_name(SignificanceBand band);

// Rendering conventions shared by every table: AUROC, differences and
// p-values to three decimals, rates as whole percents, missing cells "NA".
std::string format_fixed(double value, int decimals);
std::string format_percent(double rate);
std::string format_optional(const std::optional<double>& value, int decimals);
std::string format_ci(double lo, double hi);  // "(lo, hi)" at three decimals

struct ModelScores {
    std::string name;
    std::vector<double> scores;  // aligned with the dataset rows
};

struct NamedSubgroup {
    std::string name;
    SubgroupFilter filter;
};

// One table row per subgroup; per-model cells in model order.
struct PerformanceCell {
    std::size_t false_positives = 0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> auroc;
};

struct PerformanceRow {
    std::string subgroup;
    std::size_t total = 0;
    std::size_t positives = 0;
    std::vector<PerformanceCell> per_model;
};

struct PerformanceTable {
    std::vector<std::string> model_names;
    std::vector<double> thresholds;  // global per-model operating thresholds
    double target_sensitivity = 0.95;
    std::vector<PerformanceRow> rows;
};

// Thresholds are selected once per model on the whole population, then every
// subgroup is scored against that shared threshold.
PerformanceTable build_performance_table(const AuditDataset& ds,
                                         const std::vector<ModelScores>& models,
                                         const std::vector<NamedSubgroup>& subgroups,
                                         double target_sens = 0.95);

struct ComparisonRow {
    std::string context;  // subgroup (correlated) or model (uncorrelated)
    std::string label_a;
    std::string label_b;
    RocComparison comparison;
    SignificanceBand band = SignificanceBand::None;
    bool skipped = false;
    std::string skip_reason;
};

struct ComparisonTable {
    ComparisonMode mode = ComparisonMode::Correlated;
    std::vector<ComparisonRow> rows;
};

// Correlated mode: every unordered model pair within every subgroup, both
// curves on the same rows. Uncorrelated mode: every unordered subgroup pair
// under every model, curves on disjoint strata. The mode is always supplied
// by the caller, never inferred.
ComparisonTable build_comparison_table(const AuditDataset& ds,
                                       const std::vector<ModelScores>& models,
                                       const std::vector<NamedSubgroup>& subgroups,
                                       ComparisonMode mode);

// Calibration summary rows in the style of the verdict tables.
struct CalibrationReportRow {
    std::string model;
    std::string dataset;
    Direction direction = Direction::Overestimation;
    double statistic = 0.0;
    double p_value = 1.0;
    std::string vi_ranking;
};

struct CalibrationReport {
    std::vector<CalibrationReportRow> rows;
};

// "Prediction (1), Age (2), Sex (3)": features at their 1-based importance
// rank, ascending; embedding features are skipped in the string (their ranks
// still occupy positions).
std::string render_vi_ranking(const std::vector<VariableImportance>& ranking,
                              std::size_t max_entries = 8);

// Renderers. Markdown and CSV are views; the JSON form carries full precision
// and is the only artifact numbers should be re-derived from.
std::string render_markdown(const PerformanceTable& table);
std::string render_csv(const PerformanceTable& table);
std::string to_json_string(const PerformanceTable& table);

std::string render_markdown(const ComparisonTable& table);
std::string render_csv(const ComparisonTable& table);
std::string to_json_string(const ComparisonTable& table);

std::string render_markdown(const CalibrationReport& report);
std::string render_csv(const CalibrationReport& report);
std::string to_json_string(const CalibrationReport& report);

struct ChartFiles {
    std::string svg;
    std::string csv;
};

// One polyline per ensemble member over the evaluation index, fixed canvas,
// fixed palette, no timestamps: byte-identical for identical inputs.
ChartFiles emit_control_chart(const std::vector<CusumTrajectory>& trajectories);

// Horizontal bars, most important at the top, truncated to top_n.
ChartFiles emit_vi_plot(const std::vector<VariableImportance>& ranking, std::size_t top_n = 10);

}  // namespace fairaudit
