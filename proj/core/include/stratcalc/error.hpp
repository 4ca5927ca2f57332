#ifndef STRATCALC_ERROR_HPP
#define STRATCALC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratcalc {

enum class ErrorCode {
  ConeOverNonCompact,
  EmptyDisjoint,
  InvalidLabel,
  UnknownStratum,
  NotAChain,
  NotAConicSpace,
  PointOutsideTube,
  NonPositiveLambda,
  SampleNotInGrid,
  LinkActionUndefined,
  GridMismatch,
  NotAnIsomorphism,
  TubesNotSeparated,
  InvalidInput,
  NotLiftable,
  VertexObstruction,
  MissingLinkUnfolding,
  SyntaxError,
  SchemaError,
  DanglingId,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the named failure codes of the calculus.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace stratcalc

#endif  // STRATCALC_ERROR_HPP
