#include <benchmark/benchmark.h>

#include "fairaudit/calibration.hpp"
#include "fairaudit/residual.hpp"
#include "fairaudit/roc.hpp"
#include "fairaudit/synthetic.hpp"

using namespace fairaudit;

namespace {

GeneratedDataset make_population(std::size_t n, std::uint64_t seed) {
    return generate(default_demographic_template(n, seed));
}

}  // namespace

static void BM_Auroc(benchmark::State& state) {
    GeneratedDataset gen = make_population(static_cast<std::size_t>(state.range(0)), 17);
    std::vector<double> scores = gen.dataset.scores();
    std::vector<int> labels = gen.dataset.outcomes();
    for (auto _ : state) {
        benchmark::DoNotOptimize(auroc(scores, labels));
    }
}
BENCHMARK(BM_Auroc)->Arg(1000)->Arg(10000);

static void BM_DelongCorrelated(benchmark::State& state) {
    GeneratedDataset gen = make_population(static_cast<std::size_t>(state.range(0)), 19);
    std::vector<double> a = gen.dataset.scores();
    std::vector<int> labels = gen.dataset.outcomes();
    std::vector<double> b = a;
    for (auto& v : b) v = v * 0.9 + 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(delong_correlated(a, b, labels));
    }
}
BENCHMARK(BM_DelongCorrelated)->Arg(1000)->Arg(10000);

static void BM_FitKlr(benchmark::State& state) {
    GeneratedDataset gen = make_population(2000, 23);
    FeatureMatrix design = design_matrix(gen.dataset, DesignSpec{});
    std::vector<int> outcomes = gen.dataset.outcomes();
    ResidualModelConfig cfg;
    cfg.degree = static_cast<int>(state.range(0));
    int iterations = 0;
    for (auto _ : state) {
        ResidualModel model = fit_klr(design, outcomes, cfg);
        iterations = model.iterations;
        benchmark::DoNotOptimize(model);
    }
    state.counters["solver_iterations"] = iterations;
}
BENCHMARK(BM_FitKlr)->Arg(2)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_FitDefaultEnsemble(benchmark::State& state) {
    GeneratedDataset gen = make_population(static_cast<std::size_t>(state.range(0)), 29);
    for (auto _ : state) {
        ResidualEnsemble ens = fit_ensemble(gen.dataset, false);
        benchmark::DoNotOptimize(ens);
    }
}
BENCHMARK(BM_FitDefaultEnsemble)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SimulateNull(benchmark::State& state) {
    GeneratedDataset gen = make_population(2000, 31);
    ResidualEnsemble ens = fit_ensemble(gen.dataset, false);
    FeatureMatrix base = design_matrix(gen.dataset, ens.design, &ens.base_schema);
    std::vector<double> shifted =
        shifted_predictions(gen.dataset.scores(), 0.0, Direction::Overestimation);
    auto ghat = residual_scores(ens, base, shifted);
    for (auto _ : state) {
        auto nulls = simulate_null(shifted, ghat, Direction::Overestimation,
                                   static_cast<int>(state.range(0)), 7, 1);
        benchmark::DoNotOptimize(nulls);
    }
}
BENCHMARK(BM_SimulateNull)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_VariableImportance(benchmark::State& state) {
    GeneratedDataset gen = make_population(2000, 37);
    ResidualEnsemble ens = fit_ensemble(gen.dataset, false);
    FeatureMatrix base = design_matrix(gen.dataset, ens.design, &ens.base_schema);
    std::vector<double> shifted =
        shifted_predictions(gen.dataset.scores(), 0.0, Direction::Overestimation);
    std::vector<int> outcomes = gen.dataset.outcomes();
    for (auto _ : state) {
        auto vi = compute_variable_importance(ens, base, outcomes, shifted,
                                              Direction::Overestimation,
                                              static_cast<int>(state.range(0)), 11, 1);
        benchmark::DoNotOptimize(vi);
    }
}
BENCHMARK(BM_VariableImportance)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
