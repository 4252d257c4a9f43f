#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairaudit/errors.hpp"

namespace fairaudit {

enum class AttributeType { Categorical, Numeric };

// Categorical values carry their label, numeric values a unit-free real.
using AttributeValue = std::variant<std::string, double>;

struct AttributeSchema {
    std::string name;
    AttributeType type = AttributeType::Categorical;
    std::vector<std::string> levels;  // sorted distinct labels (categorical only)
};

// Column-role mapping for loading a prediction CSV. Deserialized from the
// JSON sidecar: {"id":..., "outcome":..., "score":...,
// "attributes":{"name":"categorical"|"numeric"}, "embedding_prefix":...}.
struct ColumnMapping {
    std::string id_column;
    std::string outcome_column;
    std::string score_column;
    std::vector<std::pair<std::string, AttributeType>> attributes;  // name-sorted
    std::string embedding_prefix;  // empty = dataset has no embeddings

    static ColumnMapping from_json(std::string_view text);
    std::string to_json() const;
};

struct AuditRecord {
    std::string id;
    int outcome = 0;    // binary {0,1}
    double score = 0.0; // probability in [0,1]
    std::vector<AttributeValue> attributes;  // aligned with dataset attribute order
    std::vector<double> embedding;           // empty when the dataset has none
};

struct Provenance {
    std::string source_path;
    std::string loaded_at;  // informational only; never serialized into artifacts
};

struct AuditDataset {
    std::vector<AuditRecord> records;
    std::vector<AttributeSchema> attribute_schema;  // dataset attribute order
    std::size_t embedding_length = 0;               // 0 = no embeddings
    Provenance provenance;

    std::size_t size() const { return records.size(); }
    // Index of an attribute in attribute_schema, or throws UnknownAttribute.
    std::size_t attribute_index(const std::string& name) const;
    bool has_attribute(const std::string& name) const;
    std::vector<double> scores() const;
    std::vector<int> outcomes() const;
    std::size_t positive_count() const;
};

// ---------------------------------------------------------------------------
// Subgroup filters
// ---------------------------------------------------------------------------

struct EqualsPredicate {
    std::string level;
};
struct InSetPredicate {
    std::vector<std::string> levels;
};
struct RangePredicate {
    std::optional<double> lo;
    std::optional<double> hi;
    bool lo_closed = true;
    bool hi_closed = false;
};
using AttributePredicate = std::variant<EqualsPredicate, InSetPredicate, RangePredicate>;

// Conjunction of per-attribute predicates; an empty conjunct list matches the
// whole population.
struct SubgroupFilter {
    struct Conjunct {
        std::string attribute;
        AttributePredicate predicate;
    };
    std::vector<Conjunct> conjuncts;

    bool empty() const { return conjuncts.empty(); }

    // Grammar: conjuncts joined by '&'. Each conjunct is one of
    //   attr=LABEL          equality on a categorical level
    //   attr=L1|L2|L3       membership in a level set
    //   attr>=x  attr>x  attr<=x  attr<x    numeric half-ranges
    static SubgroupFilter parse(std::string_view text);
    std::string to_string() const;
};

bool predicate_matches(const AttributePredicate& pred, const AttributeValue& value);

// True when the record at `row` satisfies every conjunct. Throws
// UnknownAttribute for names outside the schema.
bool filter_matches(const AuditDataset& ds, const SubgroupFilter& filter, std::size_t row);

// Returns exactly the records satisfying the filter, original order kept.
AuditDataset stratify(const AuditDataset& ds, const SubgroupFilter& filter);

// ---------------------------------------------------------------------------
// Loading / saving
// ---------------------------------------------------------------------------

// Loads a UTF-8 CSV with header according to the column mapping; enforces all
// record and dataset invariants (binary outcome, score range, unique ids,
// complete attribute values, contiguous <prefix>_0.. embedding columns).
AuditDataset load_dataset(const std::string& csv_path, const ColumnMapping& mapping);
AuditDataset load_dataset(const std::string& csv_path, const std::string& schema_json_path);

// Writes the dataset back to CSV (columns: id, outcome, score, attributes,
// embeddings) and returns the mapping describing it. Numeric fields are
// rendered with round-trip precision.
ColumnMapping save_dataset(const AuditDataset& ds, const std::string& csv_path);

std::string format_double(double value);  // shortest round-trip decimal form

}  // namespace fairaudit
