#include "fairaudit/errors.hpp"

namespace fairaudit {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::MissingValue: return "MissingValue";
        case ErrorCode::NonBinaryOutcome: return "NonBinaryOutcome";
        case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::RaggedEmbedding: return "RaggedEmbedding";
        case ErrorCode::UnknownAttribute: return "UnknownAttribute";
        case ErrorCode::MissingBlock: return "MissingBlock";
        case ErrorCode::DegenerateLabels: return "DegenerateLabels";
        case ErrorCode::TooFewPerClass: return "TooFewPerClass";
        case ErrorCode::DimensionBlowup: return "DimensionBlowup";
        case ErrorCode::SingleClassTarget: return "SingleClassTarget";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::EmptyEvaluationSet: return "EmptyEvaluationSet";
        case ErrorCode::SplitTooSmall: return "SplitTooSmall";
        case ErrorCode::FoldDegenerate: return "FoldDegenerate";
        case ErrorCode::NoPlantedBias: return "NoPlantedBias";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace fairaudit
