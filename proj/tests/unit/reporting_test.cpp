#include "fairaudit/reporting.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fairaudit/rng.hpp"
#include "fairaudit/synthetic.hpp"

using namespace fairaudit;

namespace {

AuditDataset small_fixture() {
    return generate(default_demographic_template(400, 2025)).dataset;
}

std::vector<ModelScores> two_models(const AuditDataset& ds) {
    ModelScores primary{"ModelA", ds.scores()};
    ModelScores noisy{"ModelB", ds.scores()};
    RandomStream stream(606);
    for (auto& s : noisy.scores) {
        s = expit(logit(std::clamp(s, 1e-6, 1.0 - 1e-6)) + 0.8 * stream.next_normal());
    }
    return {primary, noisy};
}

}  // namespace

TEST(Bands, ThresholdsMatchDefinition) {
    EXPECT_EQ(significance_band(0.049), SignificanceBand::Significant);
    EXPECT_EQ(significance_band(0.05), SignificanceBand::Marginal);
    EXPECT_EQ(significance_band(0.1), SignificanceBand::Marginal);
    EXPECT_EQ(significance_band(0.1000001), SignificanceBand::None);
    EXPECT_EQ(significance_band(0.9), SignificanceBand::None);
}

TEST(Bands, TotalOnRandomPvalues) {
    RandomStream stream(4242);
    for (int i = 0; i < 10000; ++i) {
        double p = stream.next_unit();
        SignificanceBand band = significance_band(p);
        if (p < 0.05) EXPECT_EQ(band, SignificanceBand::Significant);
        else if (p <= 0.1) EXPECT_EQ(band, SignificanceBand::Marginal);
        else EXPECT_EQ(band, SignificanceBand::None);
    }
}

TEST(Formatting, MatchesTableConventions) {
    EXPECT_EQ(format_fixed(0.0314159, 3), "0.031");
    EXPECT_EQ(format_fixed(-0.0004, 3), "0.000");  // negative zero normalized
    EXPECT_EQ(format_fixed(0.8564, 3), "0.856");
    EXPECT_EQ(format_ci(0.009, 0.053), "(0.009, 0.053)");
    EXPECT_EQ(format_ci(-0.007, 0.008), "(-0.007, 0.008)");
    EXPECT_EQ(format_percent(0.95), "95%");
    EXPECT_EQ(format_percent(0.949), "95%");
    EXPECT_EQ(format_percent(0.706), "71%");
    EXPECT_EQ(format_optional(std::nullopt, 3), "NA");
}

TEST(ViRanking, RankedListString) {
    std::vector<VariableImportance> ranking{
        {"Prediction", 0.5}, {"Age", 0.3}, {"Sex", 0.1}};
    EXPECT_EQ(render_vi_ranking(ranking), "Prediction (1), Age (2), Sex (3)");
}

TEST(ViRanking, EmbeddingRanksAreSkippedButHoldPositions) {
    std::vector<VariableImportance> ranking{{"Prediction", 0.5},
                                            {"Age", 0.4},
                                            {"Sex", 0.3},
                                            {"Feature Embedding (3)", 0.2},
                                            {"Site", 0.1}};
    EXPECT_EQ(render_vi_ranking(ranking), "Prediction (1), Age (2), Sex (3), Site (5)");
}

TEST(PerformanceTable, CountsMatchBruteForce) {
    AuditDataset ds = small_fixture();
    std::vector<ModelScores> models = two_models(ds);
    std::vector<NamedSubgroup> subgroups{{"Overall", SubgroupFilter{}},
                                         {"Sex=F", SubgroupFilter::parse("Sex=F")},
                                         {"Age<50", SubgroupFilter::parse("Age<50")}};
    PerformanceTable table = build_performance_table(ds, models, subgroups, 0.95);
    ASSERT_EQ(table.rows.size(), 3u);
    std::vector<int> labels = ds.outcomes();

    for (std::size_t s = 0; s < subgroups.size(); ++s) {
        for (std::size_t m = 0; m < models.size(); ++m) {
            std::size_t fp = 0, total = 0, positives = 0;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (!filter_matches(ds, subgroups[s].filter, i)) continue;
                ++total;
                positives += labels[i];
                if (labels[i] == 0 && models[m].scores[i] >= table.thresholds[m]) ++fp;
            }
            EXPECT_EQ(table.rows[s].total, total);
            EXPECT_EQ(table.rows[s].positives, positives);
            EXPECT_EQ(table.rows[s].per_model[m].false_positives, fp);
        }
    }
}

TEST(PerformanceTable, OverallSensitivityRendersAtTarget) {
    // 100 positives with distinct scores: the target is achievable exactly,
    // so the overall cell renders "95%".
    AuditDataset ds;
    ds.attribute_schema = {{"G", AttributeType::Categorical, {"a"}}};
    for (int i = 0; i < 400; ++i) {
        AuditRecord r;
        r.id = std::to_string(i);
        r.outcome = i < 100 ? 1 : 0;
        r.score = (i < 100 ? 0.5 : 0.0) + static_cast<double>(i) * 1e-3;
        r.attributes = {AttributeValue{std::string("a")}};
        ds.records.push_back(std::move(r));
    }
    std::vector<ModelScores> models{{"Model", ds.scores()}};
    PerformanceTable table =
        build_performance_table(ds, models, {{"Overall", SubgroupFilter{}}}, 0.95);
    ASSERT_TRUE(table.rows[0].per_model[0].sensitivity.has_value());
    EXPECT_DOUBLE_EQ(*table.rows[0].per_model[0].sensitivity, 0.95);
    std::string md = render_markdown(table);
    EXPECT_NE(md.find("95%"), std::string::npos);
}

TEST(PerformanceTable, ZeroPositiveSubgroupReportsNA) {
    AuditDataset ds = small_fixture();
    for (auto& r : ds.records) {
        if (std::get<double>(r.attributes[ds.attribute_index("Age")]) > 80.0) r.outcome = 0;
    }
    std::vector<ModelScores> models{{"Model", ds.scores()}};
    std::vector<NamedSubgroup> subgroups{{"Overall", SubgroupFilter{}},
                                         {"Age>80", SubgroupFilter::parse("Age>80")}};
    PerformanceTable table = build_performance_table(ds, models, subgroups, 0.95);
    EXPECT_FALSE(table.rows[1].per_model[0].sensitivity.has_value());
    EXPECT_FALSE(table.rows[1].per_model[0].auroc.has_value());
    std::string md = render_markdown(table);
    EXPECT_NE(md.find("NA"), std::string::npos);
}

TEST(ComparisonTable, SelfPairIsNullRow) {
    AuditDataset ds = small_fixture();
    std::vector<ModelScores> models{{"A", ds.scores()}, {"A2", ds.scores()}};
    ComparisonTable table = build_comparison_table(ds, models, {{"Overall", SubgroupFilter{}}},
                                                   ComparisonMode::Correlated);
    ASSERT_EQ(table.rows.size(), 1u);
    const ComparisonRow& row = table.rows[0];
    EXPECT_FALSE(row.skipped);
    EXPECT_DOUBLE_EQ(row.comparison.diff, 0.0);
    EXPECT_DOUBLE_EQ(row.comparison.p_value, 1.0);
    EXPECT_EQ(row.band, SignificanceBand::None);
    std::string md = render_markdown(table);
    EXPECT_NE(md.find("0.000"), std::string::npos);
    EXPECT_NE(md.find("1.000"), std::string::npos);
}

TEST(ComparisonTable, DegenerateSubgroupRowsAreSkippedWithReason) {
    AuditDataset ds = small_fixture();
    for (auto& r : ds.records) {
        if (std::get<double>(r.attributes[ds.attribute_index("Age")]) > 80.0) r.outcome = 0;
    }
    std::vector<ModelScores> models{{"Model", ds.scores()}};
    ComparisonTable table = build_comparison_table(
        ds, models,
        {{"Age>80", SubgroupFilter::parse("Age>80")}, {"Age<=80", SubgroupFilter::parse("Age<=80")}},
        ComparisonMode::Uncorrelated);
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_TRUE(table.rows[0].skipped);
    EXPECT_EQ(table.rows[0].skip_reason, "DegenerateLabels");
    std::string md = render_markdown(table);
    EXPECT_NE(md.find("skipped: DegenerateLabels"), std::string::npos);
}

TEST(ComparisonTable, UncorrelatedRowsCarryBothAucs) {
    AuditDataset ds = small_fixture();
    std::vector<ModelScores> models{{"Model", ds.scores()}};
    ComparisonTable table = build_comparison_table(
        ds, models,
        {{"Sex=F", SubgroupFilter::parse("Sex=F")}, {"Sex=M", SubgroupFilter::parse("Sex=M")}},
        ComparisonMode::Uncorrelated);
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(table.rows[0].context, "Model");
    EXPECT_EQ(table.rows[0].comparison.mode, ComparisonMode::Uncorrelated);
    EXPECT_GT(table.rows[0].comparison.auc_a, 0.5);
    EXPECT_GT(table.rows[0].comparison.auc_b, 0.5);
}

TEST(ControlChart, CsvEchoesTrajectoriesAndSvgIsDeterministic) {
    CusumTrajectory traj;
    traj.member_id = 1;
    traj.partial_sums = {0.1, 0.15, 0.3};
    traj.final_stat = 0.1;
    ChartFiles files = emit_control_chart({traj});
    EXPECT_EQ(files.csv,
              "row_index,member_id,cumulative_score\n"
              "0,1,0.1\n"
              "1,1,0.15\n"
              "2,1,0.3\n");
    ChartFiles again = emit_control_chart({traj});
    EXPECT_EQ(files.svg, again.svg);
    EXPECT_NE(files.svg.find("<polyline"), std::string::npos);
    EXPECT_EQ(files.svg.find("timestamp"), std::string::npos);
}

TEST(ControlChart, EightMembersEightPolylines) {
    std::vector<CusumTrajectory> trajectories;
    RandomStream stream(8);
    for (int k = 1; k <= 8; ++k) {
        CusumTrajectory traj;
        traj.member_id = k;
        double running = 0.0;
        for (int i = 0; i < 20; ++i) {
            running += stream.next_unit() * 0.1;
            traj.partial_sums.push_back(running);
        }
        traj.final_stat = running / 20.0;
        trajectories.push_back(std::move(traj));
    }
    ChartFiles files = emit_control_chart(trajectories);
    std::size_t polylines = 0, at = 0;
    while ((at = files.svg.find("<polyline", at)) != std::string::npos) {
        ++polylines;
        ++at;
    }
    EXPECT_EQ(polylines, 8u);
    EXPECT_NE(files.svg.find("k = 1"), std::string::npos);
    EXPECT_NE(files.svg.find("k = 8"), std::string::npos);
}

TEST(ViPlot, BarCountAndTruncation) {
    std::vector<VariableImportance> three{{"a", 0.3}, {"b", 0.2}, {"c", -0.1}};
    ChartFiles small = emit_vi_plot(three);
    std::size_t bars = 0, at = 0;
    while ((at = small.svg.find("<rect x=", at)) != std::string::npos) {
        ++bars;
        ++at;
    }
    EXPECT_EQ(bars, 3u);

    std::vector<VariableImportance> many;
    for (int i = 0; i < 25; ++i) {
        many.push_back({"f" + std::to_string(i), 1.0 - 0.01 * i});
    }
    ChartFiles big = emit_vi_plot(many, 10);
    bars = 0;
    at = 0;
    while ((at = big.svg.find("<rect x=", at)) != std::string::npos) {
        ++bars;
        ++at;
    }
    EXPECT_EQ(bars, 10u);
    // the CSV twin still carries every feature
    std::size_t lines = 0;
    for (char c : big.csv) lines += c == '\n';
    EXPECT_EQ(lines, 26u);
}

TEST(CalibrationReportRendering, RowFormat) {
    CalibrationReport report;
    CalibrationReportRow row;
    row.model = "ModelA";
    row.dataset = "synthetic";
    row.direction = Direction::Overestimation;
    row.statistic = 0.00761551;
    row.p_value = 0.002;
    row.vi_ranking = "Prediction (1), Age (2), Sex (3)";
    report.rows.push_back(row);
    std::string md = render_markdown(report);
    EXPECT_NE(md.find("Overestimation"), std::string::npos);
    EXPECT_NE(md.find("Prediction (1), Age (2), Sex (3)"), std::string::npos);
    EXPECT_NE(md.find("0.002"), std::string::npos);
}

TEST(JsonViews, RenderedNumbersAreDerivableFromJson) {
    AuditDataset ds = small_fixture();
    std::vector<ModelScores> models = two_models(ds);
    ComparisonTable table = build_comparison_table(ds, models, {{"Overall", SubgroupFilter{}}},
                                                   ComparisonMode::Correlated);
    std::string json = to_json_string(table);
    // the markdown cell is a 3-decimal view of the JSON diff
    EXPECT_NE(json.find("\"diff\""), std::string::npos);
    std::string md = render_csv(table);
    EXPECT_NE(md.find(format_fixed(table.rows[0].comparison.diff, 3)), std::string::npos);
}
