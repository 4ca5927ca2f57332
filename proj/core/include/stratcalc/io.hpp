#ifndef STRATCALC_IO_HPP
#define STRATCALC_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "stratcalc/error.hpp"
#include "stratcalc/morphism.hpp"
#include "stratcalc/report.hpp"
#include "stratcalc/space.hpp"
#include "stratcalc/unbend.hpp"
#include "stratcalc/unfold.hpp"

namespace stratcalc::io {

/// SyntaxError, SchemaError or DanglingId located in the document text.
/// `rule` names the schema rule that failed; `pointer` is the JSON pointer
/// of the offending value.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::string rule, std::string pointer, int line, int column, const std::string& message);

  const std::string& rule() const noexcept { return rule_; }
  const std::string& pointer() const noexcept { return pointer_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string rule_;
  std::string pointer_;
  int line_;
  int column_;
};

/// A parsed `.space` document. `expr` is set for the expression form;
/// `space` is always the presented space.
struct SpaceDocument {
  std::optional<StratSpaceExpr> expr;
  int samples = 8;
  SpacePtr space;
};

SpaceDocument parse_space(std::string_view text);
StratMorphism parse_morphism(std::string_view text);

/// Canonical text: sorted keys, two-space indent, reals with 12 significant
/// digits, LF line ends, trailing newline.
std::string write_space(const StratSpaceExpr& expr, int samples = 8);
std::string write_space(const PresentedSpace& space);
std::string write_space(const SpaceDocument& doc);
std::string write_morphism(const StratMorphism& f);
std::string write_unbending(const UnbendResult& result);
std::string write_unfolding(const UnfoldResult& result);
std::string write_report(const Report& report, std::string_view subject = {});
std::string write_harness(const HarnessReport& report);

/// Incidence poset as a DOT digraph: one node per stratum, Hasse edges
/// pointing from the smaller stratum, provenance tags as node annotations.
std::string to_dot(const PresentedSpace& space, const DesingMap* map = nullptr);

/// Throws InvalidInput when the file cannot be read.
std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace stratcalc::io

#endif  // STRATCALC_IO_HPP
