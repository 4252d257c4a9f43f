#include "fairaudit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fairaudit/csv.hpp"

namespace fairaudit {

using nlohmann::json;

std::string format_double(double value) {
    char buf[32];
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    // Shortest representation that round-trips a double.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        double parsed = std::strtod(buf, nullptr);
        if (parsed == value) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

// ---------------------------------------------------------------------------
// ColumnMapping JSON
// ---------------------------------------------------------------------------

ColumnMapping ColumnMapping::from_json(std::string_view text) {
    json doc = json::parse(text, nullptr, true);
    ColumnMapping m;
    auto require_string = [&](const char* key) -> std::string {
        if (!doc.contains(key) || !doc[key].is_string()) {
            throw AuditError(ErrorCode::InvalidSpec, std::string("schema field missing: ") + key);
        }
        return doc[key].get<std::string>();
    };
    m.id_column = require_string("id");
    m.outcome_column = require_string("outcome");
    m.score_column = require_string("score");
    if (doc.contains("attributes")) {
        for (const auto& [name, type] : doc["attributes"].items()) {
            std::string t = type.get<std::string>();
            if (t == "categorical") {
                m.attributes.emplace_back(name, AttributeType::Categorical);
            } else if (t == "numeric") {
                m.attributes.emplace_back(name, AttributeType::Numeric);
            } else {
                throw AuditError(ErrorCode::InvalidSpec, "unknown attribute type: " + t);
            }
        }
    }
    if (doc.contains("embedding_prefix") && !doc["embedding_prefix"].is_null()) {
        m.embedding_prefix = doc["embedding_prefix"].get<std::string>();
    }
    return m;
}

std::string ColumnMapping::to_json() const {
    json doc;
    doc["id"] = id_column;
    doc["outcome"] = outcome_column;
    doc["score"] = score_column;
    json attrs = json::object();
    for (const auto& [name, type] : attributes) {
        attrs[name] = type == AttributeType::Categorical ? "categorical" : "numeric";
    }
    doc["attributes"] = attrs;
    if (!embedding_prefix.empty()) doc["embedding_prefix"] = embedding_prefix;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// AuditDataset helpers
// ---------------------------------------------------------------------------

std::size_t AuditDataset::attribute_index(const std::string& name) const {
    for (std::size_t i = 0; i < attribute_schema.size(); ++i) {
        if (attribute_schema[i].name == name) return i;
    }
    throw AuditError(ErrorCode::UnknownAttribute, name);
}

bool AuditDataset::has_attribute(const std::string& name) const {
    for (const auto& a : attribute_schema) {
        if (a.name == name) return true;
    }
    return false;
}

std::vector<double> AuditDataset::scores() const {
    std::vector<double> out(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) out[i] = records[i].score;
    return out;
}

std::vector<int> AuditDataset::outcomes() const {
    std::vector<int> out(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) out[i] = records[i].outcome;
    return out;
}

std::size_t AuditDataset::positive_count() const {
    std::size_t k = 0;
    for (const auto& r : records) k += static_cast<std::size_t>(r.outcome);
    return k;
}

// ---------------------------------------------------------------------------
// Subgroup filters
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string_view::npos) return "";
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw AuditError(ErrorCode::InvalidArgument, "not a number: " + text);
    }
    return v;
}

}  // namespace

SubgroupFilter SubgroupFilter::parse(std::string_view text) {
    SubgroupFilter filter;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t amp = text.find('&', pos);
        std::string_view piece =
            amp == std::string_view::npos ? text.substr(pos) : text.substr(pos, amp - pos);
        std::string clause = trim(piece);
        if (!clause.empty()) {
            Conjunct conjunct;
            auto try_op = [&](const char* op, auto make) -> bool {
                std::size_t at = clause.find(op);
                if (at == std::string::npos) return false;
                conjunct.attribute = trim(std::string_view(clause).substr(0, at));
                std::string rhs = trim(std::string_view(clause).substr(at + std::strlen(op)));
                conjunct.predicate = make(rhs);
                return true;
            };
            bool ok =
                try_op(">=", [](const std::string& rhs) -> AttributePredicate {
                    return RangePredicate{parse_number(rhs), std::nullopt, true, false};
                }) ||
                try_op("<=", [](const std::string& rhs) -> AttributePredicate {
                    return RangePredicate{std::nullopt, parse_number(rhs), true, true};
                }) ||
                try_op(">", [](const std::string& rhs) -> AttributePredicate {
                    return RangePredicate{parse_number(rhs), std::nullopt, false, false};
                }) ||
                try_op("<", [](const std::string& rhs) -> AttributePredicate {
                    return RangePredicate{std::nullopt, parse_number(rhs), true, false};
                }) ||
                try_op("=", [](const std::string& rhs) -> AttributePredicate {
                    if (rhs.find('|') == std::string::npos) return EqualsPredicate{rhs};
                    InSetPredicate set;
                    std::size_t p = 0;
                    while (p <= rhs.size()) {
                        std::size_t bar = rhs.find('|', p);
                        std::string level = trim(bar == std::string::npos
                                                     ? std::string_view(rhs).substr(p)
                                                     : std::string_view(rhs).substr(p, bar - p));
                        if (!level.empty()) set.levels.push_back(level);
                        if (bar == std::string::npos) break;
                        p = bar + 1;
                    }
                    return set;
                });
            if (!ok || conjunct.attribute.empty()) {
                throw AuditError(ErrorCode::InvalidArgument, "cannot parse filter clause: " + clause);
            }
            filter.conjuncts.push_back(std::move(conjunct));
        }
        if (amp == std::string_view::npos) break;
        pos = amp + 1;
    }
    return filter;
}

std::string SubgroupFilter::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
        if (i > 0) out += " & ";
        const auto& c = conjuncts[i];
        if (const auto* eq = std::get_if<EqualsPredicate>(&c.predicate)) {
            out += c.attribute + "=" + eq->level;
        } else if (const auto* in = std::get_if<InSetPredicate>(&c.predicate)) {
            out += c.attribute + "=";
            for (std::size_t j = 0; j < in->levels.size(); ++j) {
                if (j > 0) out += "|";
                out += in->levels[j];
            }
        } else if (const auto* range = std::get_if<RangePredicate>(&c.predicate)) {
            if (range->lo && range->hi) {
                out += c.attribute + (range->lo_closed ? ">=" : ">") + format_double(*range->lo);
                out += " & " + c.attribute + (range->hi_closed ? "<=" : "<") + format_double(*range->hi);
            } else if (range->lo) {
                out += c.attribute + (range->lo_closed ? ">=" : ">") + format_double(*range->lo);
            } else if (range->hi) {
                out += c.attribute + (range->hi_closed ? "<=" : "<") + format_double(*range->hi);
            } else {
                out += c.attribute + ">=-inf";
            }
        }
    }
    return out;
}

bool predicate_matches(const AttributePredicate& pred, const AttributeValue& value) {
    if (const auto* eq = std::get_if<EqualsPredicate>(&pred)) {
        const auto* label = std::get_if<std::string>(&value);
        return label && *label == eq->level;
    }
    if (const auto* in = std::get_if<InSetPredicate>(&pred)) {
        const auto* label = std::get_if<std::string>(&value);
        if (!label) return false;
        return std::find(in->levels.begin(), in->levels.end(), *label) != in->levels.end();
    }
    const auto& range = std::get<RangePredicate>(pred);
    const auto* number = std::get_if<double>(&value);
    if (!number) return false;
    if (range.lo) {
        if (range.lo_closed ? *number < *range.lo : *number <= *range.lo) return false;
    }
    if (range.hi) {
        if (range.hi_closed ? *number > *range.hi : *number >= *range.hi) return false;
    }
    return true;
}

bool filter_matches(const AuditDataset& ds, const SubgroupFilter& filter, std::size_t row) {
    const AuditRecord& record = ds.records.at(row);
    for (const auto& conjunct : filter.conjuncts) {
        std::size_t idx = ds.attribute_index(conjunct.attribute);  // throws UnknownAttribute
        if (!predicate_matches(conjunct.predicate, record.attributes[idx])) return false;
    }
    return true;
}

AuditDataset stratify(const AuditDataset& ds, const SubgroupFilter& filter) {
    // Validate attribute names even for empty datasets.
    for (const auto& conjunct : filter.conjuncts) ds.attribute_index(conjunct.attribute);
    AuditDataset out;
    out.attribute_schema = ds.attribute_schema;
    out.embedding_length = ds.embedding_length;
    out.provenance = ds.provenance;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        if (filter_matches(ds, filter, i)) out.records.push_back(ds.records[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace {

std::string current_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

double parse_cell_number(const std::string& text, ErrorCode code, std::size_t row,
                         const std::string& what) {
    if (text.empty()) {
        throw AuditError(ErrorCode::MissingValue, what + " is empty", row);
    }
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw AuditError(code, what + " is not a finite number: " + text, row);
    }
    return v;
}

}  // namespace

AuditDataset load_dataset(const std::string& csv_path, const ColumnMapping& mapping) {
    csv::Table table = csv::read_file(csv_path);

    auto require_column = [&](const std::string& name) -> std::size_t {
        std::size_t idx = table.column(name);
        if (idx == csv::Table::npos) {
            throw AuditError(ErrorCode::MissingColumn, name);
        }
        return idx;
    };

    std::size_t id_col = require_column(mapping.id_column);
    std::size_t outcome_col = require_column(mapping.outcome_column);
    std::size_t score_col = require_column(mapping.score_column);

    std::vector<std::size_t> attr_cols;
    attr_cols.reserve(mapping.attributes.size());
    for (const auto& [name, type] : mapping.attributes) {
        (void)type;
        attr_cols.push_back(require_column(name));
    }

    // Embedding columns <prefix>_0 .. <prefix>_{L-1}, contiguous from 0.
    std::vector<std::size_t> embedding_cols;
    if (!mapping.embedding_prefix.empty()) {
        for (std::size_t k = 0;; ++k) {
            std::size_t idx = table.column(mapping.embedding_prefix + "_" + std::to_string(k));
            if (idx == csv::Table::npos) break;
            embedding_cols.push_back(idx);
        }
        if (embedding_cols.empty()) {
            throw AuditError(ErrorCode::MissingColumn, mapping.embedding_prefix + "_0");
        }
    }

    AuditDataset ds;
    ds.provenance = {csv_path, current_timestamp()};
    ds.embedding_length = embedding_cols.size();
    ds.attribute_schema.reserve(mapping.attributes.size());
    for (const auto& [name, type] : mapping.attributes) {
        ds.attribute_schema.push_back({name, type, {}});
    }

    std::unordered_set<std::string> seen_ids;
    std::vector<std::set<std::string>> level_sets(mapping.attributes.size());

    ds.records.reserve(table.rows.size());
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        const auto& cells = table.rows[row];
        AuditRecord record;
        record.id = cells[id_col];
        if (record.id.empty()) {
            throw AuditError(ErrorCode::MissingValue, "id is empty", row);
        }
        if (!seen_ids.insert(record.id).second) {
            throw AuditError(ErrorCode::DuplicateId, record.id, row);
        }

        const std::string& outcome_text = cells[outcome_col];
        if (outcome_text == "0") {
            record.outcome = 0;
        } else if (outcome_text == "1") {
            record.outcome = 1;
        } else {
            throw AuditError(ErrorCode::NonBinaryOutcome, "outcome value: '" + outcome_text + "'",
                             row);
        }

        record.score = parse_cell_number(cells[score_col], ErrorCode::ScoreOutOfRange, row, "score");
        if (record.score < 0.0 || record.score > 1.0) {
            throw AuditError(ErrorCode::ScoreOutOfRange,
                             "score " + format_double(record.score) + " outside [0,1]", row);
        }

        record.attributes.reserve(mapping.attributes.size());
        for (std::size_t a = 0; a < mapping.attributes.size(); ++a) {
            const std::string& cell = cells[attr_cols[a]];
            if (mapping.attributes[a].second == AttributeType::Categorical) {
                if (cell.empty()) {
                    throw AuditError(ErrorCode::MissingValue,
                                     "attribute " + mapping.attributes[a].first + " is empty", row);
                }
                level_sets[a].insert(cell);
                record.attributes.emplace_back(cell);
            } else {
                double v = parse_cell_number(cell, ErrorCode::MissingValue, row,
                                             "attribute " + mapping.attributes[a].first);
                record.attributes.emplace_back(v);
            }
        }

        if (!embedding_cols.empty()) {
            record.embedding.reserve(embedding_cols.size());
            for (std::size_t k = 0; k < embedding_cols.size(); ++k) {
                const std::string& cell = cells[embedding_cols[k]];
                if (cell.empty()) {
                    throw AuditError(ErrorCode::RaggedEmbedding,
                                     "missing embedding value " + mapping.embedding_prefix + "_" +
                                         std::to_string(k),
                                     row);
                }
                record.embedding.push_back(
                    parse_cell_number(cell, ErrorCode::RaggedEmbedding, row, "embedding value"));
            }
        }

        ds.records.push_back(std::move(record));
    }

    for (std::size_t a = 0; a < level_sets.size(); ++a) {
        ds.attribute_schema[a].levels.assign(level_sets[a].begin(), level_sets[a].end());
    }
    if (ds.records.size() < 2) {
        throw AuditError(ErrorCode::InvalidArgument,
                         "audit dataset needs at least 2 records, got " +
                             std::to_string(ds.records.size()));
    }
    return ds;
}

AuditDataset load_dataset(const std::string& csv_path, const std::string& schema_json_path) {
    std::ifstream in(schema_json_path);
    if (!in) {
        throw AuditError(ErrorCode::InvalidArgument, "cannot open schema: " + schema_json_path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_dataset(csv_path, ColumnMapping::from_json(buffer.str()));
}

ColumnMapping save_dataset(const AuditDataset& ds, const std::string& csv_path) {
    csv::Table table;
    table.header = {"id", "outcome", "score"};
    ColumnMapping mapping;
    mapping.id_column = "id";
    mapping.outcome_column = "outcome";
    mapping.score_column = "score";
    for (const auto& attr : ds.attribute_schema) {
        table.header.push_back(attr.name);
        mapping.attributes.emplace_back(attr.name, attr.type);
    }
    if (ds.embedding_length > 0) {
        mapping.embedding_prefix = "emb";
        for (std::size_t k = 0; k < ds.embedding_length; ++k) {
            table.header.push_back("emb_" + std::to_string(k));
        }
    }

    for (const auto& record : ds.records) {
        std::vector<std::string> row;
        row.reserve(table.header.size());
        row.push_back(record.id);
        row.push_back(std::to_string(record.outcome));
        row.push_back(format_double(record.score));
        for (const auto& value : record.attributes) {
            if (const auto* label = std::get_if<std::string>(&value)) {
                row.push_back(*label);
            } else {
                row.push_back(format_double(std::get<double>(value)));
            }
        }
        for (double v : record.embedding) row.push_back(format_double(v));
        table.rows.push_back(std::move(row));
    }

    csv::write_file(csv_path, table);
    return mapping;
}

}  // namespace fairaudit
