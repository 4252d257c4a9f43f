// fairaudit: subgroup discrimination and calibration audits over prediction
// files. Subcommands: gen, discrim, calib, power. All randomness flows from
// --seed; AUDIT_THREADS caps worker threads without changing any output byte.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairaudit/calibration.hpp"
#include "fairaudit/csv.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/power_study.hpp"
#include "fairaudit/reporting.hpp"
#include "fairaudit/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fairaudit;

namespace {

struct OutputDir {
    fs::path dir;
    std::string command;
    json config;
    std::vector<std::string> artifacts;

    explicit OutputDir(const std::string& path, std::string cmd)
        : dir(path), command(std::move(cmd)) {
        fs::create_directories(dir);
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) {
            throw AuditError(ErrorCode::InvalidArgument, "cannot write " + (dir / name).string());
        }
        out << content;
        artifacts.push_back(name);
    }

    void finish() {
        json manifest;
        manifest["command"] = command;
        manifest["config"] = config;
        manifest["artifacts"] = artifacts;
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw AuditError(ErrorCode::InvalidArgument, "cannot open " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

NamedSubgroup parse_named_subgroup(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        return {text, SubgroupFilter::parse(text)};
    }
    return {text.substr(0, colon), SubgroupFilter::parse(text.substr(colon + 1))};
}

std::vector<NamedSubgroup> default_subgroups(const AuditDataset& ds) {
    std::vector<NamedSubgroup> subgroups;
    subgroups.push_back({"Overall", SubgroupFilter{}});
    for (const auto& attr : ds.attribute_schema) {
        if (attr.type != AttributeType::Categorical) continue;
        for (const auto& level : attr.levels) {
            std::string expr = attr.name + "=" + level;
            subgroups.push_back({expr, SubgroupFilter::parse(expr)});
        }
    }
    return subgroups;
}

// Disjoint strata pairs for the uncorrelated comparisons: levels are paired
// within their own attribute (strata from different attributes overlap).
std::vector<std::vector<NamedSubgroup>> default_comparison_groups(const AuditDataset& ds) {
    std::vector<std::vector<NamedSubgroup>> groups;
    for (const auto& attr : ds.attribute_schema) {
        if (attr.type != AttributeType::Categorical || attr.levels.size() < 2) continue;
        std::vector<NamedSubgroup> strata;
        for (const auto& level : attr.levels) {
            std::string expr = attr.name + "=" + level;
            strata.push_back({expr, SubgroupFilter::parse(expr)});
        }
        groups.push_back(std::move(strata));
    }
    return groups;
}

std::vector<ModelScores> collect_model_scores(const std::string& data_path,
                                              const ColumnMapping& mapping,
                                              const std::vector<std::string>& model_columns) {
    std::vector<std::string> columns = model_columns;
    if (columns.empty()) columns.push_back(mapping.score_column);

    csv::Table table = csv::read_file(data_path);
    std::vector<ModelScores> models;
    for (const auto& column : columns) {
        std::size_t idx = table.column(column);
        if (idx == csv::Table::npos) {
            throw AuditError(ErrorCode::MissingColumn, column);
        }
        ModelScores model;
        model.name = column;
        model.scores.reserve(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            double v = std::strtod(table.rows[r][idx].c_str(), nullptr);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw AuditError(ErrorCode::ScoreOutOfRange, "column " + column, r);
            }
            model.scores.push_back(v);
        }
        models.push_back(std::move(model));
    }
    return models;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOptions {
    std::string spec_path;
    std::string template_name;
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
};

int run_gen(const GenOptions& opt) {
    PopulationSpec spec;
    if (!opt.spec_path.empty()) {
        spec = PopulationSpec::from_json(read_file(opt.spec_path));
    } else if (opt.template_name == "default") {
        spec = default_demographic_template(opt.n, opt.seed);
    } else {
        throw AuditError(ErrorCode::InvalidArgument, "provide --spec or --template default");
    }
    if (opt.seed_given) spec.seed = opt.seed;

    OutputDir out(opt.out_dir, "gen");
    GeneratedDataset gen = generate(spec);
    GeneratedPaths paths{(out.dir / "dataset.csv").string(), (out.dir / "schema.json").string(),
                         (out.dir / "true_risks.csv").string()};
    write_generated(gen, paths);
    out.artifacts = {"dataset.csv", "schema.json", "true_risks.csv"};
    out.write("population.json", spec.to_json());
    out.config = json::parse(spec.to_json());
    out.finish();
    std::cout << "generated " << gen.dataset.size() << " records in " << out.dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// discrim
// ---------------------------------------------------------------------------

struct DiscrimOptions {
    std::string data_path;
    std::string schema_path;
    std::string out_dir;
    std::vector<std::string> models;
    std::vector<std::string> subgroups;
    std::vector<std::string> compares;
    double target_sens = 0.95;
    std::string format = "md";
};

int run_discrim(const DiscrimOptions& opt) {
    ColumnMapping mapping = ColumnMapping::from_json(read_file(opt.schema_path));
    AuditDataset ds = load_dataset(opt.data_path, mapping);
    std::vector<ModelScores> models = collect_model_scores(opt.data_path, mapping, opt.models);

    std::vector<NamedSubgroup> subgroups;
    if (opt.subgroups.empty()) {
        subgroups = default_subgroups(ds);
    } else {
        subgroups.push_back({"Overall", SubgroupFilter{}});
        for (const auto& text : opt.subgroups) subgroups.push_back(parse_named_subgroup(text));
    }

    std::vector<std::vector<NamedSubgroup>> strata_groups;
    if (opt.compares.empty()) {
        strata_groups = default_comparison_groups(ds);
    } else {
        for (const auto& text : opt.compares) {
            std::size_t at = text.find(" vs ");
            if (at == std::string::npos) {
                throw AuditError(ErrorCode::InvalidArgument,
                                 "--compare expects \"EXPR_A vs EXPR_B\": " + text);
            }
            strata_groups.push_back({parse_named_subgroup(text.substr(0, at)),
                                     parse_named_subgroup(text.substr(at + 4))});
        }
    }

    OutputDir out(opt.out_dir, "discrim");
    PerformanceTable performance = build_performance_table(ds, models, subgroups, opt.target_sens);
    ComparisonTable model_pairs =
        build_comparison_table(ds, models, subgroups, ComparisonMode::Correlated);
    ComparisonTable subgroup_pairs;
    subgroup_pairs.mode = ComparisonMode::Uncorrelated;
    for (const auto& strata : strata_groups) {
        ComparisonTable part = build_comparison_table(ds, models, strata, ComparisonMode::Uncorrelated);
        for (auto& row : part.rows) subgroup_pairs.rows.push_back(std::move(row));
    }

    out.write("performance.json", to_json_string(performance));
    out.write("comparison_models.json", to_json_string(model_pairs));
    out.write("comparison_subgroups.json", to_json_string(subgroup_pairs));
    if (opt.format == "md") {
        out.write("performance.md", render_markdown(performance));
        out.write("comparison_models.md", render_markdown(model_pairs));
        out.write("comparison_subgroups.md", render_markdown(subgroup_pairs));
    } else if (opt.format == "csv") {
        out.write("performance.csv", render_csv(performance));
        out.write("comparison_models.csv", render_csv(model_pairs));
        out.write("comparison_subgroups.csv", render_csv(subgroup_pairs));
    }

    json config;
    config["data"] = opt.data_path;
    config["target_sensitivity"] = opt.target_sens;
    config["format"] = opt.format;
    json model_names = json::array();
    for (const auto& m : models) model_names.push_back(m.name);
    config["models"] = model_names;
    json subgroup_names = json::array();
    for (const auto& s : subgroups) subgroup_names.push_back(s.name);
    config["subgroups"] = subgroup_names;
    out.config = config;
    out.finish();
    std::cout << "discrimination tables written to " << out.dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// calib
// ---------------------------------------------------------------------------

struct CalibOptions {
    std::string data_path;
    std::string schema_path;
    std::string out_dir;
    std::string variant = "split";
    int folds = 5;
    double n1_fraction = 0.5;
    double delta = 0.0;
    std::string direction = "both";
    int replicates = 1000;
    int vi_permutations = 50;
    std::uint64_t seed = 0;
    bool embeddings = false;
    std::string model_name = "Model";
    std::string dataset_name = "Dataset";
    std::string format = "md";
};

int run_calib(const CalibOptions& opt) {
    AuditDataset ds = load_dataset(opt.data_path, opt.schema_path);

    CalibrationConfig cfg;
    cfg.delta = opt.delta;
    cfg.mc_replicates = opt.replicates;
    cfg.vi_permutations = opt.vi_permutations;
    cfg.seed = opt.seed;
    cfg.include_embeddings = opt.embeddings;
    if (opt.variant == "split") {
        cfg.variant = SplitVariant{opt.n1_fraction};
    } else if (opt.variant == "cv") {
        cfg.variant = CvVariant{opt.folds};
    } else {
        throw AuditError(ErrorCode::InvalidArgument, "--variant must be split or cv");
    }

    std::vector<Direction> directions;
    if (opt.direction == "both") {
        directions = {Direction::Overestimation, Direction::Underestimation};
    } else if (opt.direction == "over") {
        directions = {Direction::Overestimation};
    } else if (opt.direction == "under") {
        directions = {Direction::Underestimation};
    } else {
        throw AuditError(ErrorCode::InvalidArgument, "--direction must be over, under or both");
    }

    OutputDir out(opt.out_dir, "calib");
    CalibrationReport report;
    for (Direction direction : directions) {
        cfg.direction = direction;
        CalibrationVerdict verdict = std::holds_alternative<SplitVariant>(cfg.variant)
                                         ? run_split_audit(ds, cfg)
                                         : run_cv_audit(ds, cfg);
        std::string tag = direction_name(direction);
        out.write("verdict_" + tag + ".json", verdict_to_json(verdict));
        ChartFiles chart = emit_control_chart(verdict.trajectories);
        out.write("control_chart_" + tag + ".svg", chart.svg);
        out.write("control_chart_" + tag + ".csv", chart.csv);
        ChartFiles vi = emit_vi_plot(verdict.vi_ranking);
        out.write("vi_" + tag + ".svg", vi.svg);
        out.write("vi_" + tag + ".csv", vi.csv);

        CalibrationReportRow row;
        row.model = opt.model_name;
        row.dataset = opt.dataset_name;
        row.direction = direction;
        row.statistic = verdict.max_stat;
        row.p_value = verdict.p_value;
        row.vi_ranking = render_vi_ranking(verdict.vi_ranking);
        report.rows.push_back(std::move(row));
    }

    out.write("calibration_report.json", to_json_string(report));
    if (opt.format == "md") {
        out.write("calibration_report.md", render_markdown(report));
    } else if (opt.format == "csv") {
        out.write("calibration_report.csv", render_csv(report));
    }

    cfg.direction = directions.front();
    out.config = json::parse(calibration_config_to_json(cfg));
    out.config["directions"] = json::array();
    for (Direction d : directions) out.config["directions"].push_back(direction_name(d));
    out.config["data"] = opt.data_path;
    out.config["format"] = opt.format;
    out.finish();
    std::cout << "calibration audit written to " << out.dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// power
// ---------------------------------------------------------------------------

struct PowerOptions {
    std::string study_path;
    std::string out_dir;
    int trials_override = 0;
    std::string format = "md";
};

int run_power(const PowerOptions& opt) {
    StudyConfig config = StudyConfig::from_json(read_file(opt.study_path));
    if (opt.trials_override > 0) config.trials = opt.trials_override;

    StudySummary summary = run_power_study(config);

    OutputDir out(opt.out_dir, "power");
    out.write("summary.json", summary_to_json(summary));
    out.write("trials.csv", trials_to_csv(summary));
    if (opt.format == "md") {
        std::ostringstream md;
        md << "| Trials | Rejections | Rejection rate |";
        if (summary.has_planted_truth) md << " Planted-attribute hits |";
        md << "\n| --- | --- | --- |";
        if (summary.has_planted_truth) md << " --- |";
        md << "\n| " << summary.trials << " | " << summary.rejections << " | "
           << format_fixed(summary.rejection_rate, 3) << " |";
        if (summary.has_planted_truth) md << " " << summary.planted_hits << " |";
        md << "\n";
        out.write("summary.md", md.str());
    }
    out.config = json::parse(config.to_json());
    out.finish();
    std::cout << "rejection rate " << summary.rejection_rate << " over " << summary.trials
              << " trials\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subgroup discrimination and calibration audits for binary risk models"};
    app.require_subcommand(1);

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic audit population");
    gen->add_option("--spec", gen_opt.spec_path, "Population spec JSON");
    gen->add_option("--template", gen_opt.template_name, "Built-in template name (default)");
    gen->add_option("--n", gen_opt.n, "Rows for --template");
    gen->add_option("--seed", gen_opt.seed, "Seed override")->each([&](const std::string&) {
        gen_opt.seed_given = true;
    });
    gen->add_option("--out-dir", gen_opt.out_dir, "Output directory")->required();

    DiscrimOptions discrim_opt;
    CLI::App* discrim =
        app.add_subcommand("discrim", "Performance and AUROC comparison tables");
    discrim->add_option("--data", discrim_opt.data_path, "Prediction CSV")->required();
    discrim->add_option("--schema", discrim_opt.schema_path, "Schema JSON")->required();
    discrim->add_option("--out-dir", discrim_opt.out_dir, "Output directory")->required();
    discrim->add_option("--models", discrim_opt.models, "Score columns to treat as models");
    discrim->add_option("--subgroup", discrim_opt.subgroups, "NAME:EXPR subgroup definition");
    discrim->add_option("--compare", discrim_opt.compares, "\"EXPR_A vs EXPR_B\" strata pair");
    discrim->add_option("--target-sens", discrim_opt.target_sens, "Operating sensitivity target");
    discrim->add_option("--format", discrim_opt.format, "md, csv or json")
        ->check(CLI::IsMember({"md", "csv", "json"}));

    CalibOptions calib_opt;
    CLI::App* calib = app.add_subcommand("calib", "Strong-calibration CUSUM audit");
    calib->add_option("--data", calib_opt.data_path, "Prediction CSV")->required();
    calib->add_option("--schema", calib_opt.schema_path, "Schema JSON")->required();
    calib->add_option("--out-dir", calib_opt.out_dir, "Output directory")->required();
    calib->add_option("--variant", calib_opt.variant, "split or cv")
        ->check(CLI::IsMember({"split", "cv"}));
    calib->add_option("--folds", calib_opt.folds, "CV folds");
    calib->add_option("--n1-fraction", calib_opt.n1_fraction, "Split fraction used for fitting");
    calib->add_option("--delta", calib_opt.delta, "Calibration tolerance");
    calib->add_option("--direction", calib_opt.direction, "over, under or both")
        ->check(CLI::IsMember({"over", "under", "both"}));
    calib->add_option("--replicates", calib_opt.replicates, "Monte Carlo replicates");
    calib->add_option("--vi-permutations", calib_opt.vi_permutations, "VI permutations");
    calib->add_option("--seed", calib_opt.seed, "Master seed");
    calib->add_flag("--embeddings", calib_opt.embeddings, "Use embedding features");
    calib->add_option("--model-name", calib_opt.model_name, "Label for report rows");
    calib->add_option("--dataset-name", calib_opt.dataset_name, "Label for report rows");
    calib->add_option("--format", calib_opt.format, "md, csv or json")
        ->check(CLI::IsMember({"md", "csv", "json"}));

    PowerOptions power_opt;
    CLI::App* power = app.add_subcommand("power", "Seeded rejection-rate study");
    power->add_option("--study", power_opt.study_path, "Study config JSON")->required();
    power->add_option("--out-dir", power_opt.out_dir, "Output directory")->required();
    power->add_option("--trials", power_opt.trials_override, "Trial count override");
    power->add_option("--format", power_opt.format, "md, csv or json")
        ->check(CLI::IsMember({"md", "csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return run_gen(gen_opt);
        if (discrim->parsed()) return run_discrim(discrim_opt);
        if (calib->parsed()) return run_calib(calib_opt);
        if (power->parsed()) return run_power(power_opt);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const AuditError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
