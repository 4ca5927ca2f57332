#include "stratcalc/error.hpp"

namespace stratcalc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConeOverNonCompact: return "ConeOverNonCompact";
    case ErrorCode::EmptyDisjoint: return "EmptyDisjoint";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::UnknownStratum: return "UnknownStratum";
    case ErrorCode::NotAChain: return "NotAChain";
    case ErrorCode::NotAConicSpace: return "NotAConicSpace";
    case ErrorCode::PointOutsideTube: return "PointOutsideTube";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::SampleNotInGrid: return "SampleNotInGrid";
    case ErrorCode::LinkActionUndefined: return "LinkActionUndefined";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotAnIsomorphism: return "NotAnIsomorphism";
    case ErrorCode::TubesNotSeparated: return "TubesNotSeparated";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotLiftable: return "NotLiftable";
    case ErrorCode::VertexObstruction: return "VertexObstruction";
    case ErrorCode::MissingLinkUnfolding: return "MissingLinkUnfolding";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DanglingId: return "DanglingId";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace stratcalc
