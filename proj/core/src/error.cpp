#include "tradepack/error.hpp"

namespace tradepack {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::NonPositiveVolume: return "NonPositiveVolume";
    case ErrorCode::OutOfSession: return "OutOfSession";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::NoRootInBracket: return "NoRootInBracket";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InfiniteExponent: return "InfiniteExponent";
    case ErrorCode::EmptyTail: return "EmptyTail";
    case ErrorCode::NoCandidate: return "NoCandidate";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NonPositiveMean: return "NonPositiveMean";
    case ErrorCode::MissingPrice: return "MissingPrice";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace tradepack
