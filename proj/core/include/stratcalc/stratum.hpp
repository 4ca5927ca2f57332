#ifndef STRATCALC_STRATUM_HPP
#define STRATCALC_STRATUM_HPP

#include <compare>
#include <string>
#include <vector>

namespace stratcalc {

/// Provenance path of a stratum. Each token names one construction step:
///   "m:<label>"  smooth manifold       "v"          cone vertex
///   "c"          cone body of the rest "x:<label>"  product with a manifold
///   "d:<i>"      i-th disjoint summand "p+" / "p-"  suspension poles
///   "s"          suspension body       "ub"         merged stratum of an unbending
///   "cp+"/"cp-"  copies of an isolated stratum under unbending
/// Ids print as tokens joined with '/'.
class StratumId {
 public:
  StratumId() = default;
  explicit StratumId(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  /// Splits on '/'. Throws InvalidInput on an empty path or empty token.
  static StratumId parse(const std::string& text);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::string str() const;

  /// Returns `token` followed by this path.
  StratumId prefixed(const std::string& token) const;

  auto operator<=>(const StratumId&) const = default;
  bool operator==(const StratumId&) const = default;

 private:
  std::vector<std::string> tokens_;
};

struct Stratum {
  StratumId id;
  int dim = 0;
  std::string label;
  /// Number of designated sample points carried by the stratum.
  int samples = 8;

  bool operator==(const Stratum&) const = default;
};

/// Handle of one designated sample point: (stratum, index).
struct LinkSample {
  StratumId stratum;
  int index = 0;

  auto operator<=>(const LinkSample&) const = default;
  bool operator==(const LinkSample&) const = default;
};

std::string to_string(const LinkSample& s);

/// Labels become id tokens; they must be non-empty and free of '/' and whitespace.
bool is_valid_label(const std::string& label);

}  // namespace stratcalc

#endif  // STRATCALC_STRATUM_HPP
