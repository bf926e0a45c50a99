#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrfilter {

enum class ErrorCode {
    // input data
    MissingCell,
    NonPositivePrice,
    UnparsableDate,
    UnparsableNumber,
    DuplicateTicker,
    EmptyLabel,
    UnknownTicker,
    MalformedFile,
    Io,
    // numerics / preconditions
    DegenerateMarketIndex,
    ZeroVariance,
    OutOfRangeCorrelation,
    NotMaximalPlanar,
    InvalidClusterCount,
    UndefinedForSingleCluster,
    UniverseMismatch,
    DegenerateDenominator,
    DomainError,
    InconsistentInputs,
    WindowTooLong,
    DegenerateReplica,
    InvalidArgument,
};

enum class ErrorCategory { Usage, Data, Numeric };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

/// Single exception type for the library; inspect code() to dispatch.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace corrfilter
