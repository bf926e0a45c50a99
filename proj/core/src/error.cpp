#include "corrfilter/error.hpp"

namespace corrfilter {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MissingCell: return "MissingCell";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::UnparsableDate: return "UnparsableDate";
        case ErrorCode::UnparsableNumber: return "UnparsableNumber";
        case ErrorCode::DuplicateTicker: return "DuplicateTicker";
        case ErrorCode::EmptyLabel: return "EmptyLabel";
        case ErrorCode::UnknownTicker: return "UnknownTicker";
        case ErrorCode::MalformedFile: return "MalformedFile";
        case ErrorCode::Io: return "Io";
        case ErrorCode::DegenerateMarketIndex: return "DegenerateMarketIndex";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::OutOfRangeCorrelation: return "OutOfRangeCorrelation";
        case ErrorCode::NotMaximalPlanar: return "NotMaximalPlanar";
        case ErrorCode::InvalidClusterCount: return "InvalidClusterCount";
        case ErrorCode::UndefinedForSingleCluster: return "UndefinedForSingleCluster";
        case ErrorCode::UniverseMismatch: return "UniverseMismatch";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::InconsistentInputs: return "InconsistentInputs";
        case ErrorCode::WindowTooLong: return "WindowTooLong";
        case ErrorCode::DegenerateReplica: return "DegenerateReplica";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MissingCell:
        case ErrorCode::NonPositivePrice:
        case ErrorCode::UnparsableDate:
        case ErrorCode::UnparsableNumber:
        case ErrorCode::DuplicateTicker:
        case ErrorCode::EmptyLabel:
        case ErrorCode::UnknownTicker:
        case ErrorCode::MalformedFile:
        case ErrorCode::Io:
        case ErrorCode::UniverseMismatch:
            return ErrorCategory::Data;
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidClusterCount:
        case ErrorCode::WindowTooLong:
            return ErrorCategory::Usage;
        default:
            return ErrorCategory::Numeric;
    }
}

}  // namespace corrfilter
