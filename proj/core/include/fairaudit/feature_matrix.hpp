#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/dataset.hpp"

namespace fairaudit {

enum class ColumnOrigin { OneHotLevel, StandardizedNumeric, EmbeddingDim, ModelScore };

// Per-column bookkeeping for design matrices. `group` names the permutation
// unit for variable importance: a categorical attribute shares one group
// across its one-hot levels, numeric attributes and the score are their own
// group, embedding dimensions are individual groups. mean/stdev hold the fit
// split standardization for StandardizedNumeric/EmbeddingDim columns.
struct ColumnMeta {
    std::string name;
    std::string group;
    ColumnOrigin origin = ColumnOrigin::StandardizedNumeric;
    std::string level;     // one-hot columns only
    bool constant = false; // constant on the fit split; column zeroed
    double mean = 0.0;
    double stdev = 1.0;
};

// Dense real design matrix, row major, no missing entries.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::vector<ColumnMeta> columns;
    std::vector<double> values;  // rows x columns.size()

    std::size_t width() const { return columns.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * columns.size() + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * columns.size(), columns.size()};
    }
    std::span<double> row(std::size_t r) {
        return {values.data() + r * columns.size(), columns.size()};
    }
};

// Which blocks to materialize.
struct DesignSpec {
    bool attributes = true;
    bool score = true;
    bool embeddings = false;
};

// Builds the design matrix: one-hot encodes every categorical level (no
// reference level dropped), z-standardizes numeric attributes and embedding
// dimensions with the n-1 variance convention (constant columns become all
// zeros and are flagged), appends the raw model score when requested.
//
// Fit mode (fit_stats == nullptr) computes standardization statistics and
// categorical level sets from `ds`; transform mode reuses a fitted column
// schema so that train/evaluation splits share one representation.
FeatureMatrix design_matrix(const AuditDataset& ds, const DesignSpec& include,
                            const std::vector<ColumnMeta>* fit_stats = nullptr);

// Distinct VI groups in column order of first appearance.
std::vector<std::string> feature_groups(const std::vector<ColumnMeta>& columns);

}  // namespace fairaudit
