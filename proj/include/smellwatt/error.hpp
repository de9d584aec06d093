#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smellwatt {

enum class ErrorCode {
    // detector
    EmptyCorpus,
    IoFailure,
    BadRuleConfig,
    // profiler
    LaunchError,
    NoRuns,
    DegenerateBaseline,
    NoInstances,
    // impact store
    SchemaMismatch,
    InvariantViolation,
    DuplicateKey,
    MissingIndividualRecord,
    NoData,
    // predictor
    RankDeficient,
    TooFewExamples,
    NonFiniteTarget,
    MissingFeature,
    LengthMismatch,
    EmptyEval,
    SingleExample,
    NoFeatures,
    TooFewExamplesForCV,
    // advisor
    EmptyInventory,
    NoImpactSource,
    UnsupportedFormat,
    // generic input validation
    BadInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace smellwatt
