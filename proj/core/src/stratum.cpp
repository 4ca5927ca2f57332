#include "stratcalc/stratum.hpp"

#include <cctype>

#include "stratcalc/error.hpp"

namespace stratcalc {

StratumId StratumId::parse(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    if (ch == '/') {
      tokens.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  tokens.push_back(current);
  for (const auto& t : tokens) {
    if (t.empty()) throw Error(ErrorCode::InvalidInput, "malformed stratum id '" + text + "'");
  }
  return StratumId(std::move(tokens));
}

std::string StratumId::str() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out.push_back('/');
    out += tokens_[i];
  }
  return out;
}

StratumId StratumId::prefixed(const std::string& token) const {
  std::vector<std::string> tokens;
  tokens.reserve(tokens_.size() + 1);
  tokens.push_back(token);
  tokens.insert(tokens.end(), tokens_.begin(), tokens_.end());
  return StratumId(std::move(tokens));
}

std::string to_string(const LinkSample& s) {
  return s.stratum.str() + "#" + std::to_string(s.index);
}

bool is_valid_label(const std::string& label) {
  if (label.empty()) return false;
  for (unsigned char ch : label) {
    if (ch == '/' || ch == '#' || std::isspace(ch) || std::iscntrl(ch)) return false;
  }
  return true;
}

}  // namespace stratcalc
