#include "fairaudit/residual.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fairaudit/rng.hpp"

using namespace fairaudit;

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t out = 1;
    for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

FeatureMatrix numeric_matrix(const std::vector<std::vector<double>>& rows,
                             const std::vector<std::string>& names) {
    FeatureMatrix fm;
    fm.rows = rows.size();
    for (const auto& name : names) {
        ColumnMeta meta;
        meta.name = name;
        meta.group = name;
        meta.origin = ColumnOrigin::StandardizedNumeric;
        fm.columns.push_back(std::move(meta));
    }
    fm.values.reserve(fm.rows * names.size());
    for (const auto& row : rows) {
        for (double v : row) fm.values.push_back(v);
    }
    return fm;
}

// Mixed one-hot + numeric design with valid 0/1 indicator columns.
FeatureMatrix mixed_matrix(std::size_t n, std::uint64_t seed) {
    FeatureMatrix fm;
    fm.rows = n;
    ColumnMeta f, m, age, score;
    f.name = "sex=F";
    f.group = "sex";
    f.origin = ColumnOrigin::OneHotLevel;
    f.level = "F";
    m.name = "sex=M";
    m.group = "sex";
    m.origin = ColumnOrigin::OneHotLevel;
    m.level = "M";
    age.name = "age";
    age.group = "age";
    age.origin = ColumnOrigin::StandardizedNumeric;
    score.name = "Prediction";
    score.group = "Prediction";
    score.origin = ColumnOrigin::ModelScore;
    fm.columns = {f, m, age, score};
    RandomStream stream(seed);
    for (std::size_t i = 0; i < n; ++i) {
        bool female = stream.next_bernoulli(0.5);
        fm.values.push_back(female ? 1.0 : 0.0);
        fm.values.push_back(female ? 0.0 : 1.0);
        fm.values.push_back(stream.next_normal());
        fm.values.push_back(stream.next_unit());
    }
    return fm;
}

std::vector<int> outcomes_from(const FeatureMatrix& fm, std::uint64_t seed) {
    RandomStream stream(seed);
    std::vector<int> y(fm.rows);
    for (std::size_t i = 0; i < fm.rows; ++i) {
        double z = -0.4 + 0.8 * fm.at(i, 0) + 0.5 * fm.at(i, 2) + 1.2 * fm.at(i, 3);
        y[i] = stream.next_bernoulli(1.0 / (1.0 + std::exp(-z))) ? 1 : 0;
    }
    bool pos = false, neg = false;
    for (int v : y) (v ? pos : neg) = true;
    if (!pos) y[0] = 1;
    if (!neg) y[1] = 0;
    return y;
}

}  // namespace

TEST(PolynomialExpand, UnivariateDegreeTwo) {
    FeatureMatrix fm = numeric_matrix({{2.0}, {3.0}}, {"x"});
    FeatureMatrix out = polynomial_expand(fm, 2);
    ASSERT_EQ(out.width(), 2u);
    EXPECT_EQ(out.columns[0].name, "x");
    EXPECT_EQ(out.columns[1].name, "x*x");
    EXPECT_DOUBLE_EQ(out.at(0, 1), 4.0);
    EXPECT_DOUBLE_EQ(out.at(1, 1), 9.0);
}

TEST(PolynomialExpand, TwoColumnsDegreeTwoGradedLex) {
    FeatureMatrix fm = numeric_matrix({{2.0, 5.0}}, {"x", "y"});
    FeatureMatrix out = polynomial_expand(fm, 2);
    ASSERT_EQ(out.width(), 5u);
    EXPECT_EQ(out.columns[0].name, "x");
    EXPECT_EQ(out.columns[1].name, "y");
    EXPECT_EQ(out.columns[2].name, "x*x");
    EXPECT_EQ(out.columns[3].name, "x*y");
    EXPECT_EQ(out.columns[4].name, "y*y");
    EXPECT_DOUBLE_EQ(out.at(0, 3), 10.0);
}

TEST(PolynomialExpand, DegreeOneReturnsInput) {
    FeatureMatrix fm = numeric_matrix({{1.0, 2.0, 3.0}}, {"a", "b", "c"});
    FeatureMatrix out = polynomial_expand(fm, 1);
    EXPECT_EQ(out.width(), 3u);
}

TEST(PolynomialExpand, ThreeColumnsDegreeThreeCount) {
    FeatureMatrix fm = numeric_matrix({{1.0, 2.0, 3.0}}, {"a", "b", "c"});
    FeatureMatrix out = polynomial_expand(fm, 3);
    EXPECT_EQ(out.width(), binomial(6, 3) - 1);  // 19
    EXPECT_EQ(out.width(), 19u);
}

TEST(PolynomialExpand, WidthFormulaHolds) {
    for (std::size_t p = 1; p <= 4; ++p) {
        std::vector<std::string> names;
        std::vector<double> row;
        for (std::size_t c = 0; c < p; ++c) {
            names.push_back("v" + std::to_string(c));
            row.push_back(static_cast<double>(c) + 0.5);
        }
        FeatureMatrix fm = numeric_matrix({row}, names);
        for (int d = 1; d <= 5; ++d) {
            EXPECT_EQ(polynomial_expand(fm, d).width(), binomial(p + d, d) - 1)
                << "p=" << p << " d=" << d;
        }
    }
}

TEST(PolynomialExpand, CapThrowsDimensionBlowup) {
    FeatureMatrix fm = numeric_matrix({{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
                                      {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"});
    try {
        polynomial_expand(fm, 5, 100);
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionBlowup);
    }
}

TEST(ReducedExpansion, MatchesFullExpansionOnMixedDesign) {
    FeatureMatrix fm = mixed_matrix(40, 71);
    ExpansionPlan plan = ExpansionPlan::build(fm.columns, 4, 20000);
    ReducedExpansion red = ReducedExpansion::build(fm.columns, plan);
    EXPECT_LT(red.width(), plan.width());

    std::vector<double> full(plan.width());
    std::vector<double> reduced(red.width());
    RandomStream stream(99);
    std::vector<double> weights(plan.width() + 1);
    for (auto& w : weights) w = stream.next_normal() * 0.1;

    std::vector<double> coeffs = red.coefficients(weights);
    for (std::size_t r = 0; r < fm.rows; ++r) {
        plan.expand_row(fm.row(r), full);
        red.expand_row(fm.row(r), reduced);
        double z_full = weights[plan.width()];
        for (std::size_t j = 0; j < plan.width(); ++j) z_full += weights[j] * full[j];
        double z_red = coeffs[coeffs.size() - 1];
        for (std::size_t g = 0; g + 1 < coeffs.size(); ++g) z_red += coeffs[g] * reduced[g];
        EXPECT_NEAR(z_full, z_red, 1e-12);
    }
}

TEST(FitKlr, SeparablePointsStayInsideUnitInterval) {
    FeatureMatrix fm = numeric_matrix({{-1.0}, {1.0}}, {"x"});
    std::vector<int> y{0, 1};
    ResidualModelConfig cfg;
    cfg.degree = 1;
    cfg.l2_strength = 0.5;
    ResidualModel model = fit_klr(fm, y, cfg);
    std::vector<double> rates = predict_event_rate(model, fm);
    for (double r : rates) {
        EXPECT_GT(r, 0.0);
        EXPECT_LT(r, 1.0);
    }
    EXPECT_TRUE(model.converged);
}

TEST(FitKlr, BalancedSymmetricDesignHasZeroSolution) {
    FeatureMatrix fm = numeric_matrix({{-1.0}, {-1.0}, {1.0}, {1.0}}, {"x"});
    std::vector<int> y{0, 1, 0, 1};
    ResidualModelConfig cfg;
    cfg.degree = 1;
    ResidualModel model = fit_klr(fm, y, cfg);
    EXPECT_NEAR(model.weights[0], 0.0, 1e-6);
    EXPECT_NEAR(model.intercept(), 0.0, 1e-6);
}

TEST(FitKlr, GradientVanishesByCentralDifferences) {
    FeatureMatrix fm = mixed_matrix(80, 13);
    std::vector<int> y = outcomes_from(fm, 14);
    ResidualModelConfig cfg;
    cfg.degree = 3;
    ResidualModel model = fit_klr(fm, y, cfg);
    ASSERT_TRUE(model.converged);

    const double h = 1e-5;
    std::vector<double> weights = model.weights;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        std::vector<double> up = weights, down = weights;
        up[j] += h;
        down[j] -= h;
        double fd = (klr_objective(fm, y, cfg, up) - klr_objective(fm, y, cfg, down)) / (2.0 * h);
        EXPECT_LT(std::abs(fd), 1e-5) << "weight " << j;
    }
}

TEST(FitKlr, ObjectiveNotWorseThanZeroWeights) {
    FeatureMatrix fm = mixed_matrix(60, 21);
    std::vector<int> y = outcomes_from(fm, 22);
    ResidualModelConfig cfg;
    cfg.degree = 2;
    ResidualModel model = fit_klr(fm, y, cfg);
    std::vector<double> zeros(model.weights.size(), 0.0);
    EXPECT_LE(klr_objective(fm, y, cfg, model.weights), klr_objective(fm, y, cfg, zeros));
}

TEST(FitKlr, DeterministicBitForBit) {
    FeatureMatrix fm = mixed_matrix(50, 31);
    std::vector<int> y = outcomes_from(fm, 32);
    ResidualModelConfig cfg;
    cfg.degree = 3;
    ResidualModel a = fit_klr(fm, y, cfg);
    ResidualModel b = fit_klr(fm, y, cfg);
    ASSERT_EQ(a.weights.size(), b.weights.size());
    for (std::size_t j = 0; j < a.weights.size(); ++j) {
        EXPECT_EQ(a.weights[j], b.weights[j]);
    }
}

TEST(FitKlr, StrongerRidgeShrinksWeights) {
    FeatureMatrix fm = mixed_matrix(120, 41);
    std::vector<int> y = outcomes_from(fm, 42);
    double previous = std::numeric_limits<double>::infinity();
    for (double lambda : {1e-3, 1e-2, 1e-1}) {
        ResidualModelConfig cfg;
        cfg.degree = 2;
        cfg.l2_strength = lambda;
        ResidualModel model = fit_klr(fm, y, cfg);
        double norm = 0.0;
        for (std::size_t j = 0; j + 1 < model.weights.size(); ++j) {
            norm += model.weights[j] * model.weights[j];
        }
        norm = std::sqrt(norm);
        EXPECT_LE(norm, previous + 1e-9);
        previous = norm;
    }
}

TEST(FitKlr, SingleClassTargetThrows) {
    FeatureMatrix fm = numeric_matrix({{0.0}, {1.0}}, {"x"});
    std::vector<int> y{1, 1};
    ResidualModelConfig cfg;
    try {
        fit_klr(fm, y, cfg);
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingleClassTarget);
    }
}

TEST(FitKlr, NonFiniteFeatureThrows) {
    FeatureMatrix fm = numeric_matrix({{0.0}, {std::nan("")}}, {"x"});
    std::vector<int> y{1, 0};
    ResidualModelConfig cfg;
    try {
        fit_klr(fm, y, cfg);
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteFeature);
    }
}

TEST(PredictEventRate, ZeroWeightsGiveHalf) {
    FeatureMatrix fm = mixed_matrix(10, 51);
    std::vector<int> y = outcomes_from(fm, 52);
    ResidualModelConfig cfg;
    cfg.degree = 2;
    ResidualModel model = fit_klr(fm, y, cfg);
    std::fill(model.weights.begin(), model.weights.end(), 0.0);
    std::vector<double> rates = predict_event_rate(model, fm);
    for (double r : rates) EXPECT_DOUBLE_EQ(r, 0.5);
}

TEST(PredictEventRate, MeanRateMatchesEventRate) {
    FeatureMatrix fm = mixed_matrix(300, 61);
    std::vector<int> y = outcomes_from(fm, 62);
    ResidualModelConfig cfg;
    cfg.degree = 3;
    ResidualModel model = fit_klr(fm, y, cfg);
    std::vector<double> rates = predict_event_rate(model, fm);
    double mean_rate = std::accumulate(rates.begin(), rates.end(), 0.0) / rates.size();
    double event_rate = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    EXPECT_NEAR(mean_rate, event_rate, 0.01);
}

TEST(PredictEventRate, RowOrderInvariant) {
    FeatureMatrix fm = mixed_matrix(30, 71);
    std::vector<int> y = outcomes_from(fm, 72);
    ResidualModelConfig cfg;
    cfg.degree = 2;
    ResidualModel model = fit_klr(fm, y, cfg);
    std::vector<double> rates = predict_event_rate(model, fm);

    FeatureMatrix reversed = fm;
    for (std::size_t r = 0; r < fm.rows; ++r) {
        for (std::size_t c = 0; c < fm.width(); ++c) {
            reversed.at(r, c) = fm.at(fm.rows - 1 - r, c);
        }
    }
    std::vector<double> reversed_rates = predict_event_rate(model, reversed);
    for (std::size_t r = 0; r < fm.rows; ++r) {
        EXPECT_DOUBLE_EQ(rates[r], reversed_rates[fm.rows - 1 - r]);
    }
}

TEST(PredictEventRate, SchemaMismatchThrows) {
    FeatureMatrix fm = mixed_matrix(20, 81);
    std::vector<int> y = outcomes_from(fm, 82);
    ResidualModelConfig cfg;
    ResidualModel model = fit_klr(fm, y, cfg);
    FeatureMatrix other = fm;
    other.columns[0].name = "different";
    try {
        predict_event_rate(model, other);
        FAIL();
    } catch (const AuditError& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
    }
}

TEST(Ensemble, DefaultGridHasEightMembers) {
    std::vector<ResidualModelConfig> grid = default_residual_grid();
    ASSERT_EQ(grid.size(), 8u);
    for (int i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(grid[i].l2_strength, 1e-3);
        EXPECT_EQ(grid[i].degree, i + 2);
        EXPECT_DOUBLE_EQ(grid[i + 4].l2_strength, 1e-2);
        EXPECT_EQ(grid[i + 4].degree, i + 2);
        EXPECT_EQ(grid[i].max_iter, 2000);
        EXPECT_DOUBLE_EQ(grid[i].tol, 1e-6);
    }
}

TEST(Ensemble, SingleDegreeOneMemberEqualsPlainLogistic) {
    FeatureMatrix fm = mixed_matrix(90, 91);
    std::vector<int> y = outcomes_from(fm, 92);
    ResidualModelConfig cfg;
    cfg.degree = 1;
    ResidualEnsemble ens = fit_ensemble_on(fm, y, {cfg});
    ASSERT_EQ(ens.members.size(), 1u);
    ResidualModel plain = fit_klr(fm, y, cfg);
    ASSERT_EQ(ens.members[0].weights.size(), plain.weights.size());
    for (std::size_t j = 0; j < plain.weights.size(); ++j) {
        EXPECT_EQ(ens.members[0].weights[j], plain.weights[j]);
    }
}

TEST(Ensemble, IdenticalConfigsGiveIdenticalWeights) {
    FeatureMatrix fm = mixed_matrix(70, 101);
    std::vector<int> y = outcomes_from(fm, 102);
    ResidualModelConfig cfg;
    cfg.degree = 3;
    ResidualEnsemble ens = fit_ensemble_on(fm, y, {cfg, cfg});
    ASSERT_EQ(ens.members.size(), 2u);
    ASSERT_EQ(ens.members[0].weights.size(), ens.members[1].weights.size());
    for (std::size_t j = 0; j < ens.members[0].weights.size(); ++j) {
        EXPECT_EQ(ens.members[0].weights[j], ens.members[1].weights[j]);
    }
}

TEST(Ensemble, MemberPrefixMatchesStandaloneFit) {
    FeatureMatrix fm = mixed_matrix(80, 111);
    std::vector<int> y = outcomes_from(fm, 112);
    ResidualModelConfig deg2;
    deg2.degree = 2;
    ResidualModelConfig deg4;
    deg4.degree = 4;
    ResidualEnsemble ens = fit_ensemble_on(fm, y, {deg2, deg4});
    ResidualModel standalone = fit_klr(fm, y, deg2);
    ASSERT_EQ(ens.members[0].weights.size(), standalone.weights.size());
    for (std::size_t j = 0; j < standalone.weights.size(); ++j) {
        EXPECT_EQ(ens.members[0].weights[j], standalone.weights[j]);
    }
}

TEST(Serialization, JsonRoundTrip) {
    FeatureMatrix fm = mixed_matrix(40, 121);
    std::vector<int> y = outcomes_from(fm, 122);
    ResidualModelConfig cfg;
    cfg.degree = 2;
    cfg.l2_strength = 1e-2;
    ResidualModel model = fit_klr(fm, y, cfg);
    ResidualModel back = residual_model_from_json(residual_model_to_json(model));
    EXPECT_EQ(back.config.degree, model.config.degree);
    EXPECT_DOUBLE_EQ(back.config.l2_strength, model.config.l2_strength);
    ASSERT_EQ(back.weights.size(), model.weights.size());
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
        EXPECT_EQ(back.weights[j], model.weights[j]);
    }
    ASSERT_EQ(back.base_schema.size(), model.base_schema.size());
    for (std::size_t c = 0; c < model.base_schema.size(); ++c) {
        EXPECT_EQ(back.base_schema[c].name, model.base_schema[c].name);
        EXPECT_EQ(back.base_schema[c].mean, model.base_schema[c].mean);
        EXPECT_EQ(back.base_schema[c].stdev, model.base_schema[c].stdev);
    }
    // and the restored model predicts identically
    std::vector<double> a = predict_event_rate(model, fm);
    std::vector<double> b = predict_event_rate(back, fm);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}
