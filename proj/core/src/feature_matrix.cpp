#include "fairaudit/feature_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace fairaudit {

namespace {

std::string embedding_group_name(std::size_t k) {
    return "Feature Embedding (" + std::to_string(k) + ")";
}

// Column schema for fit mode, statistics still unset.
std::vector<ColumnMeta> build_schema(const AuditDataset& ds, const DesignSpec& include) {
    std::vector<ColumnMeta> columns;
    if (include.attributes) {
        if (ds.attribute_schema.empty()) {
            throw AuditError(ErrorCode::MissingBlock, "dataset has no attributes");
        }
        for (const auto& attr : ds.attribute_schema) {
            if (attr.type == AttributeType::Categorical) {
                for (const auto& level : attr.levels) {
                    ColumnMeta meta;
                    meta.name = attr.name + "=" + level;
                    meta.group = attr.name;
                    meta.origin = ColumnOrigin::OneHotLevel;
                    meta.level = level;
                    columns.push_back(std::move(meta));
                }
            } else {
                ColumnMeta meta;
                meta.name = attr.name;
                meta.group = attr.name;
                meta.origin = ColumnOrigin::StandardizedNumeric;
                columns.push_back(std::move(meta));
            }
        }
    }
    if (include.score) {
        ColumnMeta meta;
        meta.name = "Prediction";
        meta.group = "Prediction";
        meta.origin = ColumnOrigin::ModelScore;
        columns.push_back(std::move(meta));
    }
    if (include.embeddings) {
        if (ds.embedding_length == 0) {
            throw AuditError(ErrorCode::MissingBlock, "dataset has no embeddings");
        }
        for (std::size_t k = 0; k < ds.embedding_length; ++k) {
            ColumnMeta meta;
            meta.name = "emb_" + std::to_string(k);
            meta.group = embedding_group_name(k);
            meta.origin = ColumnOrigin::EmbeddingDim;
            columns.push_back(std::move(meta));
        }
    }
    return columns;
}

double raw_value(const AuditDataset& ds, const AuditRecord& record, const ColumnMeta& meta) {
    switch (meta.origin) {
        case ColumnOrigin::OneHotLevel: {
            std::size_t idx = ds.attribute_index(meta.group);
            const auto* label = std::get_if<std::string>(&record.attributes[idx]);
            if (!label) {
                throw AuditError(ErrorCode::SchemaMismatch, "attribute " + meta.group + " is not categorical");
            }
            return *label == meta.level ? 1.0 : 0.0;
        }
        case ColumnOrigin::StandardizedNumeric: {
            std::size_t idx = ds.attribute_index(meta.group);
            const auto* number = std::get_if<double>(&record.attributes[idx]);
            if (!number) {
                throw AuditError(ErrorCode::SchemaMismatch, "attribute " + meta.group + " is not numeric");
            }
            return *number;
        }
        case ColumnOrigin::ModelScore:
            return record.score;
        case ColumnOrigin::EmbeddingDim: {
            std::size_t k = static_cast<std::size_t>(std::stoul(meta.name.substr(meta.name.rfind('_') + 1)));
            if (k >= record.embedding.size()) {
                throw AuditError(ErrorCode::SchemaMismatch, "embedding dimension " + meta.name + " missing");
            }
            return record.embedding[k];
        }
    }
    return 0.0;
}

void check_transform_schema(const AuditDataset& ds, const std::vector<ColumnMeta>& columns) {
    for (const auto& meta : columns) {
        switch (meta.origin) {
            case ColumnOrigin::OneHotLevel:
            case ColumnOrigin::StandardizedNumeric:
                if (!ds.has_attribute(meta.group)) {
                    throw AuditError(ErrorCode::SchemaMismatch, "attribute missing: " + meta.group);
                }
                break;
            case ColumnOrigin::EmbeddingDim: {
                std::size_t k =
                    static_cast<std::size_t>(std::stoul(meta.name.substr(meta.name.rfind('_') + 1)));
                if (k >= ds.embedding_length) {
                    throw AuditError(ErrorCode::SchemaMismatch, "embedding too short for " + meta.name);
                }
                break;
            }
            case ColumnOrigin::ModelScore:
                break;
        }
    }
}

}  // namespace

FeatureMatrix design_matrix(const AuditDataset& ds, const DesignSpec& include,
                            const std::vector<ColumnMeta>* fit_stats) {
    FeatureMatrix fm;
    fm.rows = ds.records.size();
    const bool fit_mode = fit_stats == nullptr;
    fm.columns = fit_mode ? build_schema(ds, include) : *fit_stats;
    if (!fit_mode) check_transform_schema(ds, fm.columns);

    const std::size_t width = fm.columns.size();
    fm.values.assign(fm.rows * width, 0.0);
    for (std::size_t r = 0; r < fm.rows; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            fm.at(r, c) = raw_value(ds, ds.records[r], fm.columns[c]);
        }
    }

    for (std::size_t c = 0; c < width; ++c) {
        ColumnMeta& meta = fm.columns[c];
        bool standardized = meta.origin == ColumnOrigin::StandardizedNumeric ||
                            meta.origin == ColumnOrigin::EmbeddingDim;
        if (!standardized) continue;

        if (fit_mode) {
            double mean = 0.0;
            for (std::size_t r = 0; r < fm.rows; ++r) mean += fm.at(r, c);
            mean /= static_cast<double>(fm.rows);
            double ss = 0.0;
            for (std::size_t r = 0; r < fm.rows; ++r) {
                double d = fm.at(r, c) - mean;
                ss += d * d;
            }
            double variance = fm.rows > 1 ? ss / static_cast<double>(fm.rows - 1) : 0.0;
            meta.mean = mean;
            meta.stdev = std::sqrt(variance);
            meta.constant = !(meta.stdev > 0.0);
        }

        if (meta.constant) {
            for (std::size_t r = 0; r < fm.rows; ++r) fm.at(r, c) = 0.0;
        } else {
            for (std::size_t r = 0; r < fm.rows; ++r) {
                fm.at(r, c) = (fm.at(r, c) - meta.mean) / meta.stdev;
            }
        }
    }
    return fm;
}

std::vector<std::string> feature_groups(const std::vector<ColumnMeta>& columns) {
    std::vector<std::string> groups;
    for (const auto& meta : columns) {
        if (std::find(groups.begin(), groups.end(), meta.group) == groups.end()) {
            groups.push_back(meta.group);
        }
    }
    return groups;
}

}  // namespace fairaudit
