#include "stratcalc/report.hpp"

#include <algorithm>

namespace stratcalc {

bool Report::has(const std::string& code) const {
  return count(code) > 0;
}

std::size_t Report::count(const std::string& code) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; }));
}

void Report::add(std::string code, std::vector<StratumId> strata, std::string detail) {
  violations.push_back({std::move(code), std::move(strata), std::move(detail)});
}

void Report::merge(const Report& other, const std::string& context) {
  for (auto v : other.violations) {
    if (!context.empty()) v.detail = v.detail.empty() ? context : context + ": " + v.detail;
    violations.push_back(std::move(v));
  }
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

}  // namespace stratcalc
