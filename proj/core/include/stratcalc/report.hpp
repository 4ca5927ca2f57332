#ifndef STRATCALC_REPORT_HPP
#define STRATCALC_REPORT_HPP

#include <string>
#include <vector>

#include "stratcalc/stratum.hpp"

namespace stratcalc {

struct Violation {
  std::string code;
  std::vector<StratumId> strata;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Outcome of a validator. Validators never throw on bad input; they list what is wrong.
struct Report {
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool ok() const noexcept { return violations.empty(); }
  bool has(const std::string& code) const;
  std::size_t count(const std::string& code) const;

  void add(std::string code, std::vector<StratumId> strata = {}, std::string detail = {});
  /// Appends `other`, prefixing each detail with `context`.
  void merge(const Report& other, const std::string& context = {});
};

}  // namespace stratcalc

#endif  // STRATCALC_REPORT_HPP
