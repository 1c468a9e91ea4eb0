#include "logopt/error.hpp"

namespace logopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::UnsortedDates: return "UnsortedDates";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonViableReturn: return "NonViableReturn";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::StageMismatch: return "StageMismatch";
    case ErrorCode::SplitOutOfRange: return "SplitOutOfRange";
    case ErrorCode::CurveTooShort: return "CurveTooShort";
    case ErrorCode::DegenerateVolatility: return "DegenerateVolatility";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace logopt
