#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fairaudit {

enum class ErrorCode {
    // dataset ingestion
    MissingColumn,
    MissingValue,
    NonBinaryOutcome,
    ScoreOutOfRange,
    DuplicateId,
    RaggedEmbedding,
    UnknownAttribute,
    MissingBlock,
    // ROC analysis
    DegenerateLabels,
    TooFewPerClass,
    // residual models
    DimensionBlowup,
    SingleClassTarget,
    NonFiniteFeature,
    SchemaMismatch,
    // calibration audit
    EmptyEvaluationSet,
    SplitTooSmall,
    FoldDegenerate,
    // synthetic populations
    NoPlantedBias,
    TooLarge,
    InvalidSpec,
    // generic misuse
    InvalidArgument,
};

const char* error_code_name(ErrorCode code);

// All recoverable failures surface as AuditError; code() identifies the
// contract that was violated and row() points at the offending record when
// the failure is row-local (0-based data row, header excluded).
class AuditError : public std::runtime_error {
public:
    AuditError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    AuditError(ErrorCode code, const std::string& message, std::size_t row)
        : std::runtime_error(std::string(error_code_name(code)) + " at row " + std::to_string(row) +
                             ": " + message),
          code_(code),
          row_(row) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> row_;
};

}  // namespace fairaudit
