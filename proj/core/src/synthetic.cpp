#include "fairaudit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "fairaudit/csv.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

using nlohmann::json;

double logit(double p) { return std::log(p / (1.0 - p)); }
double expit(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// ---------------------------------------------------------------------------
// Spec JSON
// ---------------------------------------------------------------------------

namespace {

json filter_to_json(const SubgroupFilter& filter) { return filter.to_string(); }

SubgroupFilter filter_from_json(const json& j) {
    return SubgroupFilter::parse(j.get<std::string>());
}

void validate_spec(const PopulationSpec& spec) {
    if (spec.n == 0) {
        throw AuditError(ErrorCode::InvalidSpec, "population size must be positive");
    }
    for (const auto& attr : spec.attributes) {
        if (const auto* cat = std::get_if<CategoricalGenSpec>(&attr)) {
            if (cat->levels.empty() || cat->levels.size() != cat->probabilities.size() ||
                cat->levels.size() != cat->logit_coefficients.size()) {
                throw AuditError(ErrorCode::InvalidSpec,
                                 "attribute " + cat->name + " has inconsistent level lists");
            }
            double total = 0.0;
            for (double p : cat->probabilities) {
                if (p < 0.0) {
                    throw AuditError(ErrorCode::InvalidSpec, "negative level probability");
                }
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) {
                throw AuditError(ErrorCode::InvalidSpec,
                                 "level probabilities of " + cat->name + " sum to " +
                                     format_double(total));
            }
        } else {
            const auto& num = std::get<NumericGenSpec>(attr);
            if (num.distribution == NumericGenSpec::Distribution::Uniform &&
                !(num.param_b > num.param_a)) {
                throw AuditError(ErrorCode::InvalidSpec, "uniform range empty for " + num.name);
            }
            if (num.distribution == NumericGenSpec::Distribution::Normal && !(num.param_b >= 0.0)) {
                throw AuditError(ErrorCode::InvalidSpec, "negative normal sd for " + num.name);
            }
        }
    }
}

}  // namespace

PopulationSpec PopulationSpec::from_json(std::string_view text) {
    json doc = json::parse(text);
    PopulationSpec spec;
    spec.n = doc.at("n").get<std::size_t>();
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.logit_intercept = doc.value("logit_intercept", 0.0);
    for (const auto& item : doc.at("attributes")) {
        std::string type = item.at("type").get<std::string>();
        if (type == "categorical") {
            CategoricalGenSpec cat;
            cat.name = item.at("name").get<std::string>();
            cat.levels = item.at("levels").get<std::vector<std::string>>();
            cat.probabilities = item.at("probabilities").get<std::vector<double>>();
            cat.logit_coefficients = item.at("logit_coefficients").get<std::vector<double>>();
            cat.hidden = item.value("hidden", false);
            spec.attributes.emplace_back(std::move(cat));
        } else if (type == "numeric") {
            NumericGenSpec num;
            num.name = item.at("name").get<std::string>();
            std::string dist = item.at("distribution").get<std::string>();
            if (dist == "uniform") {
                num.distribution = NumericGenSpec::Distribution::Uniform;
            } else if (dist == "normal") {
                num.distribution = NumericGenSpec::Distribution::Normal;
            } else {
                throw AuditError(ErrorCode::InvalidSpec, "unknown distribution: " + dist);
            }
            num.param_a = item.at("param_a").get<double>();
            num.param_b = item.at("param_b").get<double>();
            num.logit_coefficient = item.at("logit_coefficient").get<double>();
            num.hidden = item.value("hidden", false);
            spec.attributes.emplace_back(std::move(num));
        } else {
            throw AuditError(ErrorCode::InvalidSpec, "unknown attribute type: " + type);
        }
    }
    if (doc.contains("score_law")) {
        const json& law = doc["score_law"];
        std::string kind = law.at("kind").get<std::string>();
        if (kind == "true_risk") {
            spec.score_law = TrueRiskLaw{};
        } else if (kind == "biased") {
            spec.score_law =
                BiasedLaw{filter_from_json(law.at("filter")), law.at("logit_shift").get<double>()};
        } else if (kind == "noisy") {
            spec.score_law = NoisyLaw{law.at("sd").get<double>()};
        } else if (kind == "degraded_auc") {
            spec.score_law = DegradedAucLaw{filter_from_json(law.at("filter")),
                                            law.at("noise_sd").get<double>()};
        } else {
            throw AuditError(ErrorCode::InvalidSpec, "unknown score law: " + kind);
        }
    }
    validate_spec(spec);
    return spec;
}

std::string PopulationSpec::to_json() const {
    json doc;
    doc["n"] = n;
    doc["seed"] = seed;
    doc["logit_intercept"] = logit_intercept;
    json attrs = json::array();
    for (const auto& attr : attributes) {
        if (const auto* cat = std::get_if<CategoricalGenSpec>(&attr)) {
            attrs.push_back({{"type", "categorical"},
                             {"name", cat->name},
                             {"levels", cat->levels},
                             {"probabilities", cat->probabilities},
                             {"logit_coefficients", cat->logit_coefficients},
                             {"hidden", cat->hidden}});
        } else {
            const auto& num = std::get<NumericGenSpec>(attr);
            attrs.push_back(
                {{"type", "numeric"},
                 {"name", num.name},
                 {"distribution",
                  num.distribution == NumericGenSpec::Distribution::Uniform ? "uniform" : "normal"},
                 {"param_a", num.param_a},
                 {"param_b", num.param_b},
                 {"logit_coefficient", num.logit_coefficient},
                 {"hidden", num.hidden}});
        }
    }
    doc["attributes"] = attrs;
    if (std::holds_alternative<TrueRiskLaw>(score_law)) {
        doc["score_law"] = {{"kind", "true_risk"}};
    } else if (const auto* biased = std::get_if<BiasedLaw>(&score_law)) {
        doc["score_law"] = {{"kind", "biased"},
                            {"filter", filter_to_json(biased->filter)},
                            {"logit_shift", biased->logit_shift}};
    } else if (const auto* noisy = std::get_if<NoisyLaw>(&score_law)) {
        doc["score_law"] = {{"kind", "noisy"}, {"sd", noisy->sd}};
    } else {
        const auto& degraded = std::get<DegradedAucLaw>(score_law);
        doc["score_law"] = {{"kind", "degraded_auc"},
                            {"filter", filter_to_json(degraded.filter)},
                            {"noise_sd", degraded.noise_sd}};
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

GeneratedDataset generate(const PopulationSpec& spec) {
    validate_spec(spec);

    // Full attribute view, hidden drivers included: the score-law filters see
    // everything; the emitted dataset carries only the visible attributes.
    AuditDataset full;
    full.provenance = {"synthetic", ""};
    std::vector<bool> visible;
    for (const auto& attr : spec.attributes) {
        if (const auto* cat = std::get_if<CategoricalGenSpec>(&attr)) {
            AttributeSchema schema;
            schema.name = cat->name;
            schema.type = AttributeType::Categorical;
            schema.levels = cat->levels;
            std::sort(schema.levels.begin(), schema.levels.end());
            full.attribute_schema.push_back(std::move(schema));
            visible.push_back(!cat->hidden);
        } else {
            const auto& num = std::get<NumericGenSpec>(attr);
            full.attribute_schema.push_back({num.name, AttributeType::Numeric, {}});
            visible.push_back(!num.hidden);
        }
    }

    GeneratedDataset gen;
    const int id_width = static_cast<int>(std::to_string(spec.n ? spec.n - 1 : 0).size());
    gen.true_risks.reserve(spec.n);
    full.records.reserve(spec.n);

    for (std::size_t i = 0; i < spec.n; ++i) {
        AuditRecord record;
        std::string index = std::to_string(i);
        record.id = "r" + std::string(static_cast<std::size_t>(id_width) - index.size(), '0') + index;

        RandomStream attr_stream(derive_stream_key(spec.seed, "attributes", i));
        double risk_logit = spec.logit_intercept;
        for (const auto& attr : spec.attributes) {
            if (const auto* cat = std::get_if<CategoricalGenSpec>(&attr)) {
                double u = attr_stream.next_unit();
                std::size_t level = cat->levels.size() - 1;
                double cumulative = 0.0;
                for (std::size_t l = 0; l < cat->levels.size(); ++l) {
                    cumulative += cat->probabilities[l];
                    if (u < cumulative) {
                        level = l;
                        break;
                    }
                }
                record.attributes.emplace_back(cat->levels[level]);
                risk_logit += cat->logit_coefficients[level];
            } else {
                const auto& num = std::get<NumericGenSpec>(attr);
                double value = num.distribution == NumericGenSpec::Distribution::Uniform
                                   ? num.param_a + attr_stream.next_unit() * (num.param_b - num.param_a)
                                   : num.param_a + num.param_b * attr_stream.next_normal();
                record.attributes.emplace_back(value);
                risk_logit += num.logit_coefficient * value;
            }
        }

        const double p0 = expit(risk_logit);
        gen.true_risks.push_back(p0);

        RandomStream outcome_stream(derive_stream_key(spec.seed, "outcome", i));
        record.outcome = outcome_stream.next_bernoulli(p0) ? 1 : 0;

        full.records.push_back(std::move(record));
    }

    // Scores in a second pass so the filters can address the finished records.
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double p0 = gen.true_risks[i];
        double score = p0;
        if (const auto* biased = std::get_if<BiasedLaw>(&spec.score_law)) {
            if (filter_matches(full, biased->filter, i)) {
                score = expit(logit(p0) + biased->logit_shift);
            }
        } else if (const auto* noisy = std::get_if<NoisyLaw>(&spec.score_law)) {
            RandomStream noise_stream(derive_stream_key(spec.seed, "score-noise", i));
            score = expit(logit(p0) + noisy->sd * noise_stream.next_normal());
        } else if (const auto* degraded = std::get_if<DegradedAucLaw>(&spec.score_law)) {
            if (filter_matches(full, degraded->filter, i)) {
                RandomStream noise_stream(derive_stream_key(spec.seed, "score-noise", i));
                score = expit(logit(p0) + degraded->noise_sd * noise_stream.next_normal());
            }
        }
        full.records[i].score = score;
    }

    // Strip hidden attributes from the emitted dataset.
    bool all_visible = true;
    for (bool v : visible) all_visible &= v;
    if (all_visible) {
        gen.dataset = std::move(full);
    } else {
        gen.dataset.provenance = full.provenance;
        for (std::size_t a = 0; a < full.attribute_schema.size(); ++a) {
            if (visible[a]) gen.dataset.attribute_schema.push_back(full.attribute_schema[a]);
        }
        gen.dataset.records.reserve(full.records.size());
        for (auto& record : full.records) {
            AuditRecord kept;
            kept.id = std::move(record.id);
            kept.outcome = record.outcome;
            kept.score = record.score;
            for (std::size_t a = 0; a < record.attributes.size(); ++a) {
                if (visible[a]) kept.attributes.push_back(std::move(record.attributes[a]));
            }
            gen.dataset.records.push_back(std::move(kept));
        }
    }
    return gen;
}

PlantedTruth planted_miscalibration_truth(const PopulationSpec& spec) {
    const auto* biased = std::get_if<BiasedLaw>(&spec.score_law);
    if (!biased) {
        throw AuditError(ErrorCode::NoPlantedBias, "score law plants no subgroup bias");
    }
    return {biased->filter, biased->logit_shift > 0.0 ? Direction::Overestimation
                                                      : Direction::Underestimation};
}

double brute_force_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw AuditError(ErrorCode::InvalidArgument, "scores and labels differ in length");
    }
    std::vector<double> positives, negatives;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        (labels[i] == 1 ? positives : negatives).push_back(scores[i]);
    }
    if (positives.empty() || negatives.empty()) {
        throw AuditError(ErrorCode::DegenerateLabels, "need both classes");
    }
    double wins = 0.0;
    for (double x : positives) {
        for (double y : negatives) {
            if (x > y) wins += 1.0;
            else if (x == y) wins += 0.5;
        }
    }
    return wins / (static_cast<double>(positives.size()) * static_cast<double>(negatives.size()));
}

// ---------------------------------------------------------------------------
// Exhaustive null distribution
// ---------------------------------------------------------------------------

double NullDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < statistics.size(); ++i) m += statistics[i] * probabilities[i];
    return m;
}

double NullDistribution::variance() const { return central_moment(2); }

double NullDistribution::central_moment(int order) const {
    const double m = mean();
    double out = 0.0;
    for (std::size_t i = 0; i < statistics.size(); ++i) {
        out += std::pow(statistics[i] - m, order) * probabilities[i];
    }
    return out;
}

NullDistribution exhaustive_null_statistic(std::span<const double> shifted,
                                           const std::vector<std::vector<double>>& ghat,
                                           Direction direction) {
    const std::size_t n = shifted.size();
    if (n == 0) {
        throw AuditError(ErrorCode::EmptyEvaluationSet, "no evaluation rows");
    }
    if (n > 12) {
        throw AuditError(ErrorCode::TooLarge, "exhaustive enumeration capped at 12 rows");
    }
    const std::size_t K = ghat.size();
    for (const auto& member : ghat) {
        if (member.size() != n) {
            throw AuditError(ErrorCode::InvalidArgument, "residual list not aligned");
        }
    }

    NullDistribution dist;
    const std::size_t patterns = std::size_t{1} << n;
    dist.statistics.reserve(patterns);
    dist.probabilities.reserve(patterns);
    std::vector<int> outcomes(n, 0);
    for (std::size_t mask = 0; mask < patterns; ++mask) {
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool one = (mask >> i) & 1u;
            outcomes[i] = one ? 1 : 0;
            prob *= one ? shifted[i] : 1.0 - shifted[i];
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double g = ghat[k][i];
                const bool counted =
                    direction == Direction::Underestimation ? g > 0.0 : g < 0.0;
                if (counted) sum += (static_cast<double>(outcomes[i]) - shifted[i]) * g;
            }
            best = std::max(best, sum / static_cast<double>(n));
        }
        dist.statistics.push_back(best);
        dist.probabilities.push_back(prob);
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Default template and output
// ---------------------------------------------------------------------------

PopulationSpec default_demographic_template(std::size_t n, std::uint64_t seed) {
    PopulationSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.logit_intercept = -2.4;

    CategoricalGenSpec sex;
    sex.name = "Sex";
    sex.levels = {"F", "M"};
    sex.probabilities = {0.45, 0.55};
    sex.logit_coefficients = {0.0, 0.3};
    spec.attributes.emplace_back(std::move(sex));

    NumericGenSpec age;
    age.name = "Age";
    age.distribution = NumericGenSpec::Distribution::Uniform;
    age.param_a = 18.0;
    age.param_b = 90.0;
    age.logit_coefficient = 0.02;
    spec.attributes.emplace_back(std::move(age));

    CategoricalGenSpec fst;
    fst.name = "FST";
    fst.levels = {"1", "2", "3", "4", "5", "6"};
    fst.probabilities = {0.10, 0.30, 0.25, 0.15, 0.12, 0.08};
    fst.logit_coefficients = {-0.25, -0.10, 0.00, 0.10, 0.20, 0.30};
    spec.attributes.emplace_back(std::move(fst));

    return spec;
}

void write_generated(const GeneratedDataset& gen, const GeneratedPaths& paths) {
    ColumnMapping mapping = save_dataset(gen.dataset, paths.dataset_csv);
    std::ofstream schema_out(paths.schema_json, std::ios::binary);
    if (!schema_out) {
        throw AuditError(ErrorCode::InvalidArgument, "cannot write " + paths.schema_json);
    }
    schema_out << mapping.to_json();

    csv::Table truth;
    truth.header = {"id", "true_risk"};
    for (std::size_t i = 0; i < gen.dataset.records.size(); ++i) {
        truth.rows.push_back({gen.dataset.records[i].id, format_double(gen.true_risks[i])});
    }
    csv::write_file(paths.true_risks_csv, truth);
}

}  // namespace fairaudit
