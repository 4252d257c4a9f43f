#include "fairaudit/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fairaudit {

using nlohmann::json;

SignificanceBand significance_band(double p_value) {
    if (p_value < 0.05) return SignificanceBand::Significant;
    if (p_value <= 0.1) return SignificanceBand::Marginal;
    return SignificanceBand::None;
}

const char* band_name(SignificanceBand band) {
    switch (band) {
        case SignificanceBand::Significant: return "significant";
        case SignificanceBand::Marginal: return "marginal";
        case SignificanceBand::None: return "none";
    }
    return "none";
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string out = buf;
    // normalize "-0.000" to "0.000"
    if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') {
        out.erase(out.begin());
    }
    return out;
}

std::string format_percent(double rate) {
    long long percent = std::llround(rate * 100.0);
    return std::to_string(percent) + "%";
}

std::string format_optional(const std::optional<double>& value, int decimals) {
    if (!value) return "NA";
    return format_fixed(*value, decimals);
}

std::string format_ci(double lo, double hi) {
    return "(" + format_fixed(lo, 3) + ", " + format_fixed(hi, 3) + ")";
}

// ---------------------------------------------------------------------------
// Performance table
// ---------------------------------------------------------------------------

namespace {

void validate_models(const AuditDataset& ds, const std::vector<ModelScores>& models) {
    if (models.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "need at least one model score column");
    }
    for (const auto& model : models) {
        if (model.scores.size() != ds.size()) {
            throw AuditError(ErrorCode::InvalidArgument,
                             "model " + model.name + " scores not aligned with dataset");
        }
    }
}

std::vector<std::size_t> subgroup_rows(const AuditDataset& ds, const SubgroupFilter& filter) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (filter_matches(ds, filter, i)) rows.push_back(i);
    }
    return rows;
}

}  // namespace

PerformanceTable build_performance_table(const AuditDataset& ds,
                                         const std::vector<ModelScores>& models,
                                         const std::vector<NamedSubgroup>& subgroups,
                                         double target_sens) {
    validate_models(ds, models);
    std::vector<int> labels = ds.outcomes();

    PerformanceTable table;
    table.target_sensitivity = target_sens;
    for (const auto& model : models) {
        table.model_names.push_back(model.name);
        table.thresholds.push_back(operating_threshold(model.scores, labels, target_sens).threshold);
    }

    for (const auto& subgroup : subgroups) {
        std::vector<std::size_t> rows = subgroup_rows(ds, subgroup.filter);
        PerformanceRow out_row;
        out_row.subgroup = subgroup.name;
        out_row.total = rows.size();
        std::vector<int> sub_labels;
        sub_labels.reserve(rows.size());
        for (std::size_t i : rows) sub_labels.push_back(labels[i]);
        out_row.positives = static_cast<std::size_t>(
            std::count(sub_labels.begin(), sub_labels.end(), 1));

        for (std::size_t m = 0; m < models.size(); ++m) {
            std::vector<double> sub_scores;
            sub_scores.reserve(rows.size());
            for (std::size_t i : rows) sub_scores.push_back(models[m].scores[i]);

            PerformanceCell cell;
            ConfusionSummary cm =
                confusion_at(sub_scores, sub_labels, OperatingPoint{table.thresholds[m]});
            cell.false_positives = cm.fp;
            cell.sensitivity = cm.sensitivity();
            cell.specificity = cm.specificity();
            try {
                cell.auroc = auroc(sub_scores, sub_labels);
            } catch (const AuditError& e) {
                if (e.code() != ErrorCode::DegenerateLabels) throw;
                cell.auroc = std::nullopt;
            }
            out_row.per_model.push_back(cell);
        }
        table.rows.push_back(std::move(out_row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Comparison tables
// ---------------------------------------------------------------------------

ComparisonTable build_comparison_table(const AuditDataset& ds,
                                       const std::vector<ModelScores>& models,
                                       const std::vector<NamedSubgroup>& subgroups,
                                       ComparisonMode mode) {
    validate_models(ds, models);
    std::vector<int> labels = ds.outcomes();

    ComparisonTable table;
    table.mode = mode;

    auto push_row = [&](std::string context, std::string label_a, std::string label_b,
                        auto&& compute) {
        ComparisonRow row;
        row.context = std::move(context);
        row.label_a = std::move(label_a);
        row.label_b = std::move(label_b);
        try {
            row.comparison = compute();
            row.band = significance_band(row.comparison.p_value);
        } catch (const AuditError& e) {
            if (e.code() != ErrorCode::DegenerateLabels && e.code() != ErrorCode::TooFewPerClass) {
                throw;
            }
            row.skipped = true;
            row.skip_reason = error_code_name(e.code());
        }
        table.rows.push_back(std::move(row));
    };

    if (mode == ComparisonMode::Correlated) {
        for (const auto& subgroup : subgroups) {
            std::vector<std::size_t> rows = subgroup_rows(ds, subgroup.filter);
            std::vector<int> sub_labels;
            sub_labels.reserve(rows.size());
            for (std::size_t i : rows) sub_labels.push_back(labels[i]);
            for (std::size_t a = 0; a < models.size(); ++a) {
                for (std::size_t b = a + 1; b < models.size(); ++b) {
                    std::vector<double> scores_a, scores_b;
                    scores_a.reserve(rows.size());
                    scores_b.reserve(rows.size());
                    for (std::size_t i : rows) {
                        scores_a.push_back(models[a].scores[i]);
                        scores_b.push_back(models[b].scores[i]);
                    }
                    push_row(subgroup.name, models[a].name, models[b].name, [&]() {
                        return delong_correlated(scores_a, scores_b, sub_labels);
                    });
                }
            }
        }
    } else {
        for (const auto& model : models) {
            for (std::size_t a = 0; a < subgroups.size(); ++a) {
                for (std::size_t b = a + 1; b < subgroups.size(); ++b) {
                    std::vector<std::size_t> rows_a = subgroup_rows(ds, subgroups[a].filter);
                    std::vector<std::size_t> rows_b = subgroup_rows(ds, subgroups[b].filter);
                    std::vector<double> scores_a, scores_b;
                    std::vector<int> labels_a, labels_b;
                    for (std::size_t i : rows_a) {
                        scores_a.push_back(model.scores[i]);
                        labels_a.push_back(labels[i]);
                    }
                    for (std::size_t i : rows_b) {
                        scores_b.push_back(model.scores[i]);
                        labels_b.push_back(labels[i]);
                    }
                    push_row(model.name, subgroups[a].name, subgroups[b].name, [&]() {
                        return delong_uncorrelated(scores_a, labels_a, scores_b, labels_b);
                    });
                }
            }
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// VI ranking string
// ---------------------------------------------------------------------------

std::string render_vi_ranking(const std::vector<VariableImportance>& ranking,
                              std::size_t max_entries) {
    std::string out;
    std::size_t emitted = 0;
    for (std::size_t i = 0; i < ranking.size() && emitted < max_entries; ++i) {
        if (ranking[i].feature.rfind("Feature Embedding (", 0) == 0) continue;
        if (emitted > 0) out += ", ";
        out += ranking[i].feature + " (" + std::to_string(i + 1) + ")";
        ++emitted;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

namespace {

std::string md_row(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& cell : cells) out += " " + cell + " |";
    out += "\n";
    return out;
}

std::string md_separator(std::size_t columns) {
    std::string out = "|";
    for (std::size_t i = 0; i < columns; ++i) out += " --- |";
    out += "\n";
    return out;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += ",";
        bool quote = cells[i].find_first_of(",\"") != std::string::npos;
        if (quote) {
            out += '"';
            for (char c : cells[i]) {
                if (c == '"') out += "\"\"";
                else out += c;
            }
            out += '"';
        } else {
            out += cells[i];
        }
    }
    out += "\n";
    return out;
}

std::vector<std::string> performance_header(const PerformanceTable& table) {
    std::vector<std::string> header = {"Subgroup", "Total", "Positives"};
    for (const auto& m : table.model_names) header.push_back("FP (" + m + ")");
    for (const auto& m : table.model_names) header.push_back("Sensitivity (" + m + ")");
    for (const auto& m : table.model_names) header.push_back("Specificity (" + m + ")");
    for (const auto& m : table.model_names) header.push_back("AUROC (" + m + ")");
    return header;
}

std::vector<std::string> performance_cells(const PerformanceRow& row) {
    std::vector<std::string> cells = {row.subgroup, std::to_string(row.total),
                                      std::to_string(row.positives)};
    for (const auto& cell : row.per_model) cells.push_back(std::to_string(cell.false_positives));
    for (const auto& cell : row.per_model) {
        cells.push_back(cell.sensitivity ? format_percent(*cell.sensitivity) : "NA");
    }
    for (const auto& cell : row.per_model) {
        cells.push_back(cell.specificity ? format_percent(*cell.specificity) : "NA");
    }
    for (const auto& cell : row.per_model) cells.push_back(format_optional(cell.auroc, 3));
    return cells;
}

}  // namespace

std::string render_markdown(const PerformanceTable& table) {
    std::vector<std::string> header = performance_header(table);
    std::string out = md_row(header) + md_separator(header.size());
    for (const auto& row : table.rows) out += md_row(performance_cells(row));
    return out;
}

std::string render_csv(const PerformanceTable& table) {
    std::string out = csv_line(performance_header(table));
    for (const auto& row : table.rows) out += csv_line(performance_cells(row));
    return out;
}

std::string to_json_string(const PerformanceTable& table) {
    json doc;
    doc["target_sensitivity"] = table.target_sensitivity;
    doc["model_names"] = table.model_names;
    doc["thresholds"] = table.thresholds;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json cells = json::array();
        for (const auto& cell : row.per_model) {
            json c;
            c["false_positives"] = cell.false_positives;
            c["sensitivity"] = cell.sensitivity ? json(*cell.sensitivity) : json(nullptr);
            c["specificity"] = cell.specificity ? json(*cell.specificity) : json(nullptr);
            c["auroc"] = cell.auroc ? json(*cell.auroc) : json(nullptr);
            cells.push_back(c);
        }
        rows.push_back({{"subgroup", row.subgroup},
                        {"total", row.total},
                        {"positives", row.positives},
                        {"per_model", cells}});
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> comparison_header(ComparisonMode mode) {
    if (mode == ComparisonMode::Correlated) {
        return {"Subgroup", "Comparison", "Difference in AUROC (95% CI)", "P-value", "Significance"};
    }
    return {"Model",   "Comparison",  "AUROC A", "AUROC B", "Difference in AUROC (95% CI)",
            "P-value", "Significance"};
}

std::vector<std::string> comparison_cells(const ComparisonRow& row, ComparisonMode mode) {
    std::string comparison_label = row.label_a + " vs " + row.label_b;
    if (row.skipped) {
        std::size_t width = mode == ComparisonMode::Correlated ? 5 : 7;
        std::vector<std::string> cells = {row.context, comparison_label};
        while (cells.size() < width - 1) cells.push_back("NA");
        cells.push_back("skipped: " + row.skip_reason);
        return cells;
    }
    std::string diff_ci = format_fixed(row.comparison.diff, 3) + " " +
                          format_ci(row.comparison.ci_lo, row.comparison.ci_hi);
    std::string p = format_fixed(row.comparison.p_value, 3);
    if (mode == ComparisonMode::Correlated) {
        return {row.context, comparison_label, diff_ci, p, band_name(row.band)};
    }
    return {row.context,
            comparison_label,
            format_fixed(row.comparison.auc_a, 3),
            format_fixed(row.comparison.auc_b, 3),
            diff_ci,
            p,
            band_name(row.band)};
}

}  // namespace

std::string render_markdown(const ComparisonTable& table) {
    std::vector<std::string> header = comparison_header(table.mode);
    std::string out = md_row(header) + md_separator(header.size());
    for (const auto& row : table.rows) out += md_row(comparison_cells(row, table.mode));
    return out;
}

std::string render_csv(const ComparisonTable& table) {
    std::string out = csv_line(comparison_header(table.mode));
    for (const auto& row : table.rows) out += csv_line(comparison_cells(row, table.mode));
    return out;
}

std::string to_json_string(const ComparisonTable& table) {
    json doc;
    doc["mode"] = table.mode == ComparisonMode::Correlated ? "correlated" : "uncorrelated";
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["context"] = row.context;
        r["a"] = row.label_a;
        r["b"] = row.label_b;
        if (row.skipped) {
            r["skipped"] = row.skip_reason;
        } else {
            r["auc_a"] = row.comparison.auc_a;
            r["auc_b"] = row.comparison.auc_b;
            r["diff"] = row.comparison.diff;
            r["variance"] = row.comparison.variance;
            r["z"] = row.comparison.z;
            r["p_value"] = row.comparison.p_value;
            r["ci"] = {row.comparison.ci_lo, row.comparison.ci_hi};
            r["band"] = band_name(row.band);
        }
        rows.push_back(r);
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> calibration_header() {
    return {"Model", "Dataset", "Direction", "Test Statistic", "P-value", "VI Ranking"};
}

std::vector<std::string> calibration_cells(const CalibrationReportRow& row) {
    return {row.model,
            row.dataset,
            row.direction == Direction::Overestimation ? "Overestimation" : "Underestimation",
            format_fixed(row.statistic, 4),
            format_fixed(row.p_value, 3),
            row.vi_ranking};
}

}  // namespace

std::string render_markdown(const CalibrationReport& report) {
    std::string out = md_row(calibration_header()) + md_separator(calibration_header().size());
    for (const auto& row : report.rows) out += md_row(calibration_cells(row));
    return out;
}

std::string render_csv(const CalibrationReport& report) {
    std::string out = csv_line(calibration_header());
    for (const auto& row : report.rows) out += csv_line(calibration_cells(row));
    return out;
}

std::string to_json_string(const CalibrationReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"model", row.model},
                        {"dataset", row.dataset},
                        {"direction", direction_name(row.direction)},
                        {"statistic", row.statistic},
                        {"p_value", row.p_value},
                        {"vi_ranking", row.vi_ranking}});
    }
    json doc;
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string axis_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

ChartFiles emit_control_chart(const std::vector<CusumTrajectory>& trajectories) {
    if (trajectories.empty() || trajectories.front().partial_sums.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "empty trajectories");
    }
    const double width = 960.0, height = 420.0;
    const double left = 70.0, right = 150.0, top = 30.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::size_t n = 0;
    double y_min = 0.0, y_max = 0.0;
    for (const auto& traj : trajectories) {
        n = std::max(n, traj.partial_sums.size());
        for (double v : traj.partial_sums) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (y_max == y_min) y_max = y_min + 1.0;
    const double x_span = n > 1 ? static_cast<double>(n - 1) : 1.0;

    auto x_of = [&](std::size_t i) { return left + plot_w * static_cast<double>(i) / x_span; };
    auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    // axes
    svg << "  <line x1=\"" << svg_coord(left) << "\" y1=\"" << svg_coord(top) << "\" x2=\""
        << svg_coord(left) << "\" y2=\"" << svg_coord(top + plot_h)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "  <line x1=\"" << svg_coord(left) << "\" y1=\"" << svg_coord(top + plot_h)
        << "\" x2=\"" << svg_coord(left + plot_w) << "\" y2=\"" << svg_coord(top + plot_h)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // ticks
    for (int t = 0; t <= 4; ++t) {
        double frac = static_cast<double>(t) / 4.0;
        double yv = y_min + frac * (y_max - y_min);
        double yy = y_of(yv);
        svg << "  <text x=\"" << svg_coord(left - 8) << "\" y=\"" << svg_coord(yy + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << axis_label(yv) << "</text>\n";
        double xv = frac * x_span;
        double xx = x_of(static_cast<std::size_t>(frac * x_span));
        svg << "  <text x=\"" << svg_coord(xx) << "\" y=\"" << svg_coord(top + plot_h + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << axis_label(xv) << "</text>\n";
    }
    svg << "  <text x=\"" << svg_coord(left + plot_w / 2) << "\" y=\"" << svg_coord(height - 12)
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << "Evaluation index</text>\n";
    svg << "  <text x=\"16\" y=\"" << svg_coord(top + plot_h / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << svg_coord(top + plot_h / 2) << ")\">"
        << "Cumulative score</text>\n";

    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto& traj = trajectories[k];
        const char* color = kPalette[k % kPaletteSize];
        svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < traj.partial_sums.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << svg_coord(x_of(i)) << ',' << svg_coord(y_of(traj.partial_sums[i]));
        }
        svg << "\"/>\n";
        double ly = top + 16.0 + 16.0 * static_cast<double>(k);
        svg << "  <line x1=\"" << svg_coord(left + plot_w + 12) << "\" y1=\"" << svg_coord(ly - 4)
            << "\" x2=\"" << svg_coord(left + plot_w + 34) << "\" y2=\"" << svg_coord(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "  <text x=\"" << svg_coord(left + plot_w + 40) << "\" y=\"" << svg_coord(ly)
            << "\" font-size=\"11\" font-family=\"sans-serif\">k = " << traj.member_id
            << "</text>\n";
    }
    svg << "</svg>\n";

    ChartFiles files;
    files.svg = svg.str();
    files.csv = trajectories_to_csv(trajectories);
    return files;
}

ChartFiles emit_vi_plot(const std::vector<VariableImportance>& ranking, std::size_t top_n) {
    if (ranking.empty()) {
        throw AuditError(ErrorCode::InvalidArgument, "empty importance ranking");
    }
    const std::size_t shown = std::min(top_n, ranking.size());
    const double bar_h = 24.0, gap = 10.0;
    const double left = 220.0, right = 90.0, top = 30.0, bottom = 40.0;
    const double plot_w = 420.0;
    const double height = top + bottom + static_cast<double>(shown) * (bar_h + gap);
    const double width = left + plot_w + right;

    double max_abs = 0.0;
    for (std::size_t i = 0; i < shown; ++i) {
        max_abs = std::max(max_abs, std::abs(ranking[i].importance));
    }
    if (max_abs == 0.0) max_abs = 1.0;
    // zero line position: negative bars extend left of it
    bool any_negative = false;
    for (std::size_t i = 0; i < shown; ++i) {
        if (ranking[i].importance < 0.0) any_negative = true;
    }
    const double zero_x = any_negative ? left + plot_w * 0.35 : left;
    const double pos_span = left + plot_w - zero_x;
    const double neg_span = zero_x - left;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "  <line x1=\"" << svg_coord(zero_x) << "\" y1=\"" << svg_coord(top) << "\" x2=\""
        << svg_coord(zero_x) << "\" y2=\"" << svg_coord(height - bottom)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < shown; ++i) {
        const auto& item = ranking[i];
        double y = top + static_cast<double>(i) * (bar_h + gap);
        double frac = std::abs(item.importance) / max_abs;
        double len = frac * (item.importance >= 0.0 ? pos_span : neg_span);
        double x = item.importance >= 0.0 ? zero_x : zero_x - len;
        svg << "  <rect x=\"" << svg_coord(x) << "\" y=\"" << svg_coord(y) << "\" width=\""
            << svg_coord(len) << "\" height=\"" << svg_coord(bar_h)
            << "\" fill=\"#1f77b4\"/>\n";
        svg << "  <text x=\"" << svg_coord(left - 10) << "\" y=\"" << svg_coord(y + bar_h - 7)
            << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" << item.feature
            << "</text>\n";
        double vx = item.importance >= 0.0 ? x + len + 6 : x - 6;
        svg << "  <text x=\"" << svg_coord(vx) << "\" y=\"" << svg_coord(y + bar_h - 7)
            << "\" font-size=\"11\" font-family=\"sans-serif\""
            << (item.importance >= 0.0 ? "" : " text-anchor=\"end\"") << ">"
            << format_fixed(item.importance, 4) << "</text>\n";
    }
    svg << "  <text x=\"" << svg_coord(left + plot_w / 2) << "\" y=\"" << svg_coord(height - 12)
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << "Importance (drop in test statistic)</text>\n";
    svg << "</svg>\n";

    std::ostringstream csv;
    csv << "rank,feature,importance\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        std::string feature = ranking[i].feature;
        bool quote = feature.find(',') != std::string::npos;
        csv << (i + 1) << ',' << (quote ? "\"" + feature + "\"" : feature) << ','
            << format_double(ranking[i].importance) << '\n';
    }

    ChartFiles files;
    files.svg = svg.str();
    files.csv = csv.str();
    return files;
}

}  // namespace fairaudit
