#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fairaudit/calibration.hpp"
#include "fairaudit/synthetic.hpp"

namespace fairaudit {

// JSON round-trip for audit configurations (used by study files and CLI
// manifests).
std::string calibration_config_to_json(const CalibrationConfig& cfg);
CalibrationConfig calibration_config_from_json(std::string_view text);

// A seeded rejection-rate study: `trials` audits of independently generated
// populations. Per-trial seeds are derived from the base seeds, so the study
// is reproducible and trial-parallel.
struct StudyConfig {
    PopulationSpec population;
    CalibrationConfig audit;
    int trials = 100;
    int vi_top_k = 3;  // rank window for the planted-attribute hit rate

    static StudyConfig from_json(std::string_view text);
    std::string to_json() const;
};

struct TrialOutcome {
    int trial = 0;
    double max_stat = 0.0;
    double p_value = 1.0;
    bool rejected = false;
    std::vector<std::string> top_features;
    bool planted_hit = false;
};

struct StudySummary {
    int trials = 0;
    int rejections = 0;
    double rejection_rate = 0.0;
    bool has_planted_truth = false;
    int planted_hits = 0;
    double planted_hit_rate = 0.0;
    std::vector<TrialOutcome> per_trial;
};

StudySummary run_power_study(const StudyConfig& config, std::size_t workers = 0);

std::string summary_to_json(const StudySummary& summary);
std::string trials_to_csv(const StudySummary& summary);

}  // namespace fairaudit
