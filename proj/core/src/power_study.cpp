#include "fairaudit/power_study.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/parallel.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

using nlohmann::json;

namespace {

json config_json(const CalibrationConfig& cfg) {
    json doc;
    doc["delta"] = cfg.delta;
    doc["direction"] = direction_name(cfg.direction);
    if (const auto* split = std::get_if<SplitVariant>(&cfg.variant)) {
        doc["variant"] = {{"kind", "split"}, {"n1_fraction", split->n1_fraction}};
    } else {
        doc["variant"] = {{"kind", "cv"}, {"folds", std::get<CvVariant>(cfg.variant).folds}};
    }
    doc["mc_replicates"] = cfg.mc_replicates;
    doc["vi_permutations"] = cfg.vi_permutations;
    doc["seed"] = cfg.seed;
    doc["include_embeddings"] = cfg.include_embeddings;
    if (cfg.configs.empty()) {
        doc["grid"] = "default";
    } else {
        json grid = json::array();
        for (const auto& member : cfg.configs) {
            grid.push_back({{"degree", member.degree},
                            {"l2_strength", member.l2_strength},
                            {"max_iter", member.max_iter},
                            {"tol", member.tol}});
        }
        doc["grid"] = grid;
    }
    return doc;
}

CalibrationConfig config_from(const json& doc) {
    CalibrationConfig cfg;
    cfg.delta = doc.value("delta", 0.0);
    std::string direction = doc.value("direction", std::string("overestimation"));
    if (direction == "overestimation") {
        cfg.direction = Direction::Overestimation;
    } else if (direction == "underestimation") {
        cfg.direction = Direction::Underestimation;
    } else {
        throw AuditError(ErrorCode::InvalidSpec, "unknown direction: " + direction);
    }
    if (doc.contains("variant")) {
        const json& variant = doc["variant"];
        std::string kind = variant.at("kind").get<std::string>();
        if (kind == "split") {
            cfg.variant = SplitVariant{variant.value("n1_fraction", 0.5)};
        } else if (kind == "cv") {
            cfg.variant = CvVariant{variant.value("folds", 5)};
        } else {
            throw AuditError(ErrorCode::InvalidSpec, "unknown variant: " + kind);
        }
    }
    cfg.mc_replicates = doc.value("mc_replicates", 1000);
    cfg.vi_permutations = doc.value("vi_permutations", 50);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.include_embeddings = doc.value("include_embeddings", false);
    if (doc.contains("grid") && doc["grid"].is_array()) {
        for (const auto& item : doc["grid"]) {
            ResidualModelConfig member;
            member.degree = item.at("degree").get<int>();
            member.l2_strength = item.at("l2_strength").get<double>();
            member.max_iter = item.value("max_iter", 2000);
            member.tol = item.value("tol", 1e-6);
            cfg.configs.push_back(member);
        }
    }
    return cfg;
}

}  // namespace

std::string calibration_config_to_json(const CalibrationConfig& cfg) {
    return config_json(cfg).dump(2) + "\n";
}

CalibrationConfig calibration_config_from_json(std::string_view text) {
    return config_from(json::parse(text));
}

StudyConfig StudyConfig::from_json(std::string_view text) {
    json doc = json::parse(text);
    StudyConfig config;
    config.population = PopulationSpec::from_json(doc.at("population").dump());
    config.audit = config_from(doc.at("audit"));
    config.trials = doc.value("trials", 100);
    config.vi_top_k = doc.value("vi_top_k", 3);
    return config;
}

std::string StudyConfig::to_json() const {
    json doc;
    doc["population"] = json::parse(population.to_json());
    doc["audit"] = config_json(audit);
    doc["trials"] = trials;
    doc["vi_top_k"] = vi_top_k;
    return doc.dump(2) + "\n";
}

StudySummary run_power_study(const StudyConfig& config, std::size_t workers) {
    if (config.trials < 1) {
        throw AuditError(ErrorCode::InvalidArgument, "study needs at least one trial");
    }

    std::set<std::string> planted_attributes;
    bool has_planted = std::holds_alternative<BiasedLaw>(config.population.score_law);
    if (has_planted) {
        PlantedTruth truth = planted_miscalibration_truth(config.population);
        for (const auto& conjunct : truth.filter.conjuncts) {
            planted_attributes.insert(conjunct.attribute);
        }
    }

    StudySummary summary;
    summary.trials = config.trials;
    summary.has_planted_truth = has_planted;
    summary.per_trial.resize(static_cast<std::size_t>(config.trials));

    parallel_for(static_cast<std::size_t>(config.trials), workers, [&](std::size_t t) {
        PopulationSpec population = config.population;
        population.seed = derive_stream_key(config.population.seed, "study-population", t);
        CalibrationConfig audit = config.audit;
        audit.seed = derive_stream_key(config.audit.seed, "study-audit", t);

        GeneratedDataset gen = generate(population);
        CalibrationVerdict verdict = std::holds_alternative<SplitVariant>(audit.variant)
                                         ? run_split_audit(gen.dataset, audit, 1)
                                         : run_cv_audit(gen.dataset, audit, 1);

        TrialOutcome outcome;
        outcome.trial = static_cast<int>(t);
        outcome.max_stat = verdict.max_stat;
        outcome.p_value = verdict.p_value;
        outcome.rejected = verdict.reject;
        const std::size_t top_k =
            std::min<std::size_t>(static_cast<std::size_t>(config.vi_top_k),
                                  verdict.vi_ranking.size());
        for (std::size_t r = 0; r < top_k; ++r) {
            outcome.top_features.push_back(verdict.vi_ranking[r].feature);
        }
        if (has_planted) {
            for (const auto& feature : outcome.top_features) {
                if (planted_attributes.count(feature)) {
                    outcome.planted_hit = true;
                    break;
                }
            }
        }
        summary.per_trial[t] = std::move(outcome);
    });

    for (const auto& trial : summary.per_trial) {
        if (trial.rejected) ++summary.rejections;
        if (trial.planted_hit) ++summary.planted_hits;
    }
    summary.rejection_rate =
        static_cast<double>(summary.rejections) / static_cast<double>(summary.trials);
    summary.planted_hit_rate =
        has_planted ? static_cast<double>(summary.planted_hits) / static_cast<double>(summary.trials)
                    : 0.0;
    return summary;
}

std::string summary_to_json(const StudySummary& summary) {
    json doc;
    doc["trials"] = summary.trials;
    doc["rejections"] = summary.rejections;
    doc["rejection_rate"] = summary.rejection_rate;
    if (summary.has_planted_truth) {
        doc["planted_hits"] = summary.planted_hits;
        doc["planted_hit_rate"] = summary.planted_hit_rate;
    }
    return doc.dump(2) + "\n";
}

std::string trials_to_csv(const StudySummary& summary) {
    std::ostringstream out;
    out << "trial,max_stat,p_value,rejected,planted_hit,top_features\n";
    for (const auto& trial : summary.per_trial) {
        std::string features;
        for (std::size_t i = 0; i < trial.top_features.size(); ++i) {
            if (i > 0) features += ";";
            features += trial.top_features[i];
        }
        out << trial.trial << ',' << format_double(trial.max_stat) << ','
            << format_double(trial.p_value) << ',' << (trial.rejected ? 1 : 0) << ','
            << (trial.planted_hit ? 1 : 0) << ',' << features << '\n';
    }
    return out.str();
}

}  // namespace fairaudit
