#include "smellwatt/error.hpp"

namespace smellwatt {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::BadRuleConfig: return "BadRuleConfig";
        case ErrorCode::LaunchError: return "LaunchError";
        case ErrorCode::NoRuns: return "NoRuns";
        case ErrorCode::DegenerateBaseline: return "DegenerateBaseline";
        case ErrorCode::NoInstances: return "NoInstances";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::DuplicateKey: return "DuplicateKey";
        case ErrorCode::MissingIndividualRecord: return "MissingIndividualRecord";
        case ErrorCode::NoData: return "NoData";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::TooFewExamples: return "TooFewExamples";
        case ErrorCode::NonFiniteTarget: return "NonFiniteTarget";
        case ErrorCode::MissingFeature: return "MissingFeature";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyEval: return "EmptyEval";
        case ErrorCode::SingleExample: return "SingleExample";
        case ErrorCode::NoFeatures: return "NoFeatures";
        case ErrorCode::TooFewExamplesForCV: return "TooFewExamplesForCV";
        case ErrorCode::EmptyInventory: return "EmptyInventory";
        case ErrorCode::NoImpactSource: return "NoImpactSource";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

}  // namespace smellwatt
