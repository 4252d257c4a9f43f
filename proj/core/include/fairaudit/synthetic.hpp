#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairaudit/calibration.hpp"
#include "fairaudit/dataset.hpp"

namespace fairaudit {

// Generative description of one attribute: categorical level probabilities or
// a numeric distribution, plus its additive contribution to the risk logit.
// A hidden attribute drives the true risk (and may appear in score-law
// filters) but is left out of the emitted dataset — it models risk signal
// that reaches the audit only through the audited model's score.
struct CategoricalGenSpec {
    std::string name;
    std::vector<std::string> levels;
    std::vector<double> probabilities;       // sums to 1 within 1e-12
    std::vector<double> logit_coefficients;  // one per level
    bool hidden = false;
};

struct NumericGenSpec {
    std::string name;
    enum class Distribution { Uniform, Normal } distribution = Distribution::Uniform;
    double param_a = 0.0;  // Uniform: lo, Normal: mean
    double param_b = 1.0;  // Uniform: hi, Normal: standard deviation
    double logit_coefficient = 0.0;
    bool hidden = false;
};

using AttributeGenSpec = std::variant<CategoricalGenSpec, NumericGenSpec>;

// How the audited model's score relates to the true risk.
struct TrueRiskLaw {};                                     // score = p0 exactly
struct BiasedLaw {                                         // logit shift inside a subgroup
    SubgroupFilter filter;
    double logit_shift = 0.0;
};
struct NoisyLaw {                                          // logit noise everywhere
    double sd = 0.0;
};
struct DegradedAucLaw {                                    // logit noise inside a subgroup
    SubgroupFilter filter;
    double noise_sd = 0.0;
};
using ScoreLaw = std::variant<TrueRiskLaw, BiasedLaw, NoisyLaw, DegradedAucLaw>;

struct PopulationSpec {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double logit_intercept = 0.0;
    std::vector<AttributeGenSpec> attributes;
    ScoreLaw score_law = TrueRiskLaw{};

    static PopulationSpec from_json(std::string_view text);
    std::string to_json() const;
};

struct GeneratedDataset {
    AuditDataset dataset;
    std::vector<double> true_risks;  // hidden from audits, visible to oracles
};

// Deterministic given the seed: attributes, true risks, Bernoulli outcomes and
// model scores per the score law. Identical output for identical specs.
GeneratedDataset generate(const PopulationSpec& spec);

struct PlantedTruth {
    SubgroupFilter filter;
    Direction direction;
};

// The planted filter and direction implied by a Biased score law; throws
// NoPlantedBias for any other law.
PlantedTruth planted_miscalibration_truth(const PopulationSpec& spec);

// Independent O(m*n) AUROC oracle: literal double loop over positive-negative
// pairs with the half-credit tie rule.
double brute_force_auc(std::span<const double> scores, std::span<const int> labels);

// Exact null distribution of the max CUSUM statistic on a small instance:
// enumerates every outcome vector (2^n, n <= 12) weighted by the Bernoulli
// probabilities of the shifted scores.
struct NullDistribution {
    std::vector<double> statistics;    // one per outcome pattern
    std::vector<double> probabilities; // sums to 1
    double mean() const;
    double variance() const;
    double central_moment(int order) const;
};

NullDistribution exhaustive_null_statistic(std::span<const double> shifted,
                                           const std::vector<std::vector<double>>& ghat,
                                           Direction direction);

// Demographic template used by the command-line fixtures: Sex in {F, M}, Age
// uniform over [18, 90], FST in 1..6, event rate around one quarter.
PopulationSpec default_demographic_template(std::size_t n, std::uint64_t seed);

// Writes dataset.csv + schema.json in the audit input format and the true
// risks to a separate sidecar CSV that must never be fed to audits.
struct GeneratedPaths {
    std::string dataset_csv;
    std::string schema_json;
    std::string true_risks_csv;
};
void write_generated(const GeneratedDataset& gen, const GeneratedPaths& paths);

double logit(double p);
double expit(double z);

}  // namespace fairaudit
