#include "stratcalc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace stratcalc::io {

using json = nlohmann::json;

ParseError::ParseError(ErrorCode code, std::string rule, std::string pointer, int line, int column,
                       const std::string& message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": [" + rule + "] " + message),
      rule_(std::move(rule)),
      pointer_(std::move(pointer)),
      line_(line),
      column_(column) {}

namespace {

constexpr int kVersion = 1;
constexpr std::size_t kInlineWidth = 72;

// ---------------------------------------------------------------------------
// Canonical emitter

std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

bool has_object(const json& j) {
  if (j.is_object()) return true;
  if (j.is_array()) return std::any_of(j.begin(), j.end(), [](const json& e) { return has_object(e); });
  return false;
}

void emit(const json& j, std::string& out, int depth);

void emit_compact(const json& j, std::string& out) {
  if (j.is_array()) {
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ", ";
      emit_compact(j[i], out);
    }
    out += ']';
    return;
  }
  emit(j, out, 0);
}

void emit(const json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::number_float: out += format_real(j.get<double>()); return;
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad;
        out += json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (!has_object(j)) {
        std::string flat;
        emit_compact(j, flat);
        if (flat.size() + pad.size() <= kInlineWidth) {
          out += flat;
          return;
        }
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        emit(j[i], out, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "]";
      return;
    }
    default: out += j.dump(); return;
  }
}

std::string canonical(const json& j) {
  std::string out;
  emit(j, out, 0);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Locating a JSON pointer in the source text

class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  /// Offset of the value at `pointer`, or of the deepest prefix that exists.
  std::size_t find(const std::string& pointer) {
    pos_ = 0;
    ws();
    std::size_t start = 0;
    while (start < pointer.size()) {
      std::size_t next = pointer.find('/', start + 1);
      if (next == std::string::npos) next = pointer.size();
      std::string token = unescape(pointer.substr(start + 1, next - start - 1));
      if (!descend(token)) break;
      start = next;
    }
    return pos_;
  }

 private:
  static std::string unescape(std::string s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '~' && i + 1 < s.size()) {
        out += s[i + 1] == '1' ? '/' : '~';
        ++i;
      } else {
        out += s[i];
      }
    }
    return out;
  }

  bool descend(const std::string& token) {
    const std::size_t here = pos_;
    if (peek() == '{') {
      ++pos_;
      ws();
      while (peek() == '"') {
        std::string key = string();
        ws();
        ++pos_;  // ':'
        ws();
        if (key == token) return true;
        skip();
        ws();
        if (peek() == ',') {
          ++pos_;
          ws();
        }
      }
    } else if (peek() == '[') {
      std::size_t index = 0;
      try {
        index = std::stoul(token);
      } catch (...) {
        pos_ = here;
        return false;
      }
      ++pos_;
      ws();
      for (std::size_t i = 0; peek() != ']' && pos_ < text_.size(); ++i) {
        if (i == index) return true;
        skip();
        ws();
        if (peek() == ',') {
          ++pos_;
          ws();
        }
      }
    }
    pos_ = here;
    return false;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void skip() {
    char c = peek();
    if (c == '"') {
      string();
      return;
    }
    if (c == '{' || c == '[') {
      int level = 0;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (d == '"') {
          string();
          continue;
        }
        if (d == '{' || d == '[') ++level;
        if (d == '}' || d == ']') --level;
        ++pos_;
        if (level == 0) return;
      }
      return;
    }
    while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) == std::string_view::npos) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema-checked access to a parsed document

class Node {
 public:
  Node(std::string_view text, const json& value, std::string pointer)
      : text_(text), value_(&value), pointer_(std::move(pointer)) {}

  const json& value() const { return *value_; }
  const std::string& pointer() const { return pointer_; }

  [[noreturn]] void fail(ErrorCode code, const std::string& rule, const std::string& message) const {
    auto [line, column] = line_column(text_, Locator(text_).find(pointer_));
    throw ParseError(code, rule, pointer_.empty() ? "/" : pointer_, line, column, message);
  }
  [[noreturn]] void schema(const std::string& rule, const std::string& message) const {
    fail(ErrorCode::SchemaError, rule, message);
  }
  [[noreturn]] void dangling(const std::string& rule, const std::string& message) const {
    fail(ErrorCode::DanglingId, rule, message);
  }

  bool has(const char* key) const { return value_->is_object() && value_->contains(key); }

  Node operator[](const char* key) const {
    if (!value_->is_object()) schema("object", "expected an object");
    auto it = value_->find(key);
    if (it == value_->end()) schema("required-key", std::string("missing key \"") + key + "\"");
    return child(*it, key);
  }

  std::optional<Node> find(const char* key) const {
    if (!value_->is_object()) schema("object", "expected an object");
    auto it = value_->find(key);
    if (it == value_->end()) return std::nullopt;
    return child(*it, key);
  }

  std::vector<Node> elements() const {
    if (!value_->is_array()) schema("array", "expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_->size(); ++i) out.push_back(child((*value_)[i], std::to_string(i)));
    return out;
  }

  std::vector<std::pair<std::string, Node>> members() const {
    if (!value_->is_object()) schema("object", "expected an object");
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = value_->begin(); it != value_->end(); ++it) out.emplace_back(it.key(), child(it.value(), it.key()));
    return out;
  }

  std::string str() const {
    if (!value_->is_string()) schema("string", "expected a string");
    return value_->get<std::string>();
  }
  int integer() const {
    if (!value_->is_number_integer()) schema("integer", "expected an integer");
    return value_->get<int>();
  }
  double real() const {
    if (!value_->is_number()) schema("number", "expected a number");
    return value_->get<double>();
  }
  bool boolean() const {
    if (!value_->is_boolean()) schema("boolean", "expected true or false");
    return value_->get<bool>();
  }
  StratumId id() const {
    try {
      return StratumId::parse(str());
    } catch (const Error&) {
      schema("stratum-id", "malformed stratum id");
    }
  }

  Node child(const json& v, const std::string& key) const { return Node(text_, v, pointer_ + "/" + escape_token(key)); }

 private:
  std::string_view text_;
  const json* value_;
  std::string pointer_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, column] = line_column(text, offset);
    std::string what = e.what();
    auto colon = what.find(": ", what.find("syntax error"));
    throw ParseError(ErrorCode::SyntaxError, "json", "", line, column,
                     colon == std::string::npos ? what : what.substr(colon + 2));
  }
}

void check_header(const Node& root, const char* format) {
  if (!root.value().is_object()) root.schema("object", "document must be an object");
  if (root["format"].str() != format) root["format"].schema("format", std::string("expected \"") + format + "\"");
  if (root["version"].integer() != kVersion) root["version"].schema("version", "unsupported version");
}

json header(const char* format) {
  json j = json::object();
  j["format"] = format;
  j["version"] = kVersion;
  return j;
}

// ---------------------------------------------------------------------------
// Writers

json id_list(const std::vector<StratumId>& ids) {
  json a = json::array();
  for (const auto& s : ids) a.push_back(s.str());
  return a;
}

json id_map(const std::map<StratumId, StratumId>& m) {
  json j = json::object();
  for (const auto& [a, b] : m) j[a.str()] = b.str();
  return j;
}

json link_map_json(const LinkMap& g) {
  json samples = json::array();
  for (const auto& [a, b] : g.samples) samples.push_back({a.stratum.str(), a.index, b.stratum.str(), b.index});
  return {{"name", g.name}, {"strata", id_map(g.strata)}, {"samples", samples}};
}

json group_json(const CocycleGroup& g) {
  json elements = json::array();
  for (const auto& e : g.elements) elements.push_back(link_map_json(e));
  return {{"elements", elements}, {"table", g.table}};
}

json charts_json(const std::vector<ChartRecord>& charts, const StratumId& base) {
  json a = json::array();
  for (const auto& c : charts) {
    json j = {{"id", c.id}, {"kind", c.kind == ChartKind::BundleChart ? "bundle" : "pseudomanifold"}};
    if (c.base != base) j["base"] = c.base.str();
    a.push_back(j);
  }
  return a;
}

json transitions_json(const std::vector<Transition>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back({t.from, t.to, t.element});
  return a;
}

json triples_json(const std::vector<std::array<std::string, 3>>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back({t[0], t[1], t[2]});
  return a;
}

bool same_link(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && structurally_equal(*a, *b));
}

json space_body(const PresentedSpace& space);

json tube_json(const Tube& t, const PresentedSpace& space) {
  json j = {{"charts", charts_json(t.charts, t.base)},
            {"group", group_json(t.group)},
            {"transitions", transitions_json(t.transitions)},
            {"triples", triples_json(t.triples)},
            {"fiber", id_map(t.fiber)}};
  if (t.family) j["family"] = *t.family;
  if (t.link && !same_link(t.link, space.link(t.base))) j["link"] = space_body(*t.link);
  return j;
}

json space_body(const PresentedSpace& space) {
  json strata = json::array();
  for (const auto& s : space.strata()) {
    strata.push_back({{"id", s.id.str()}, {"dim", s.dim}, {"label", s.label}, {"samples", s.samples}});
  }
  auto pairs = space.leq_pairs();
  std::sort(pairs.begin(), pairs.end());
  json leq = json::array();
  for (const auto& [a, b] : pairs) {
    if (a != b) leq.push_back({a.str(), b.str()});
  }
  json links = json::object();
  for (const auto& [id, link] : space.links()) {
    if (link) links[id.str()] = space_body(*link);
  }
  json tubes = json::object();
  for (const auto& [id, tube] : space.tm().tubes) tubes[id.str()] = tube_json(tube, space);
  json families = json::array();
  for (const auto& f : space.tm().families) families.push_back(id_list(f));
  return {{"compact", space.compact()},
          {"localized", space.localized()},
          {"strata", strata},
          {"leq", leq},
          {"links", links},
          {"tm",
           {{"tubes", tubes},
            {"families", families},
            {"nesting_ok", space.tm().nesting_ok},
            {"justification", space.tm().justification}}}};
}

json smooth_json(const SmoothSpec& m) { return {{"label", m.label}, {"dim", m.dim}, {"compact", m.compact}}; }

json expr_json(const StratSpaceExpr& e) {
  using Kind = StratSpaceExpr::Kind;
  switch (e.kind()) {
    case Kind::Smooth: {
      json j = smooth_json(e.manifold());
      j["kind"] = "smooth";
      return j;
    }
    case Kind::Product: return {{"kind", "product"}, {"manifold", smooth_json(e.manifold())}, {"space", expr_json(e.args().at(0))}};
    case Kind::Cone: return {{"kind", "cone"}, {"link", expr_json(e.args().at(0))}};
    case Kind::Suspension: return {{"kind", "suspension"}, {"base", expr_json(e.args().at(0))}};
    case Kind::Disjoint: {
      json parts = json::array();
      for (const auto& p : e.args()) parts.push_back(expr_json(p));
      return {{"kind", "disjoint"}, {"parts", parts}};
    }
    case Kind::Given: return {{"kind", "presented"}, {"space", e.presented() ? space_body(*e.presented()) : json()}};
  }
  return json();
}

const char* op_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::Const: return "const";
    case Expr::Op::U: return "u";
    case Expr::Op::R: return "r";
    case Expr::Op::L: return "l";
    case Expr::Op::Add: return "+";
    case Expr::Op::Mul: return "*";
    case Expr::Op::Neg: return "neg";
    case Expr::Op::Abs: return "abs";
    case Expr::Op::Sgn: return "sgn";
    case Expr::Op::Poly: return "poly";
    case Expr::Op::Exp: return "exp";
    case Expr::Op::Sin: return "sin";
    case Expr::Op::Cos: return "cos";
    case Expr::Op::Apply: return "apply";
  }
  return "?";
}

json expr_json(const Expr& e) {
  json j = json::array({op_name(e.op())});
  switch (e.op()) {
    case Expr::Op::Const: j.push_back(e.value()); break;
    case Expr::Op::U: j.push_back(e.index()); break;
    case Expr::Op::R:
    case Expr::Op::L: break;
    case Expr::Op::Poly:
      j.push_back(e.coeffs());
      j.push_back(expr_json(e.args().at(0)));
      break;
    case Expr::Op::Apply:
      j.push_back(link_map_json(e.map()));
      j.push_back(expr_json(e.args().at(0)));
      break;
    default:
      for (const auto& a : e.args()) j.push_back(expr_json(a));
  }
  return j;
}

/// A model link is written as a reference when it is the link of a stratum
/// of the domain or codomain.
struct LinkScope {
  const PresentedSpace* space = nullptr;
  const char* side = nullptr;
  StratumId stratum;
};

json model_json(const BasicModel& m, const LinkScope& scope = {}) {
  json j = {{"u_dim", m.u_dim}, {"cylinder", m.cylinder}};
  if (scope.space && scope.space->contains(scope.stratum) && m.link &&
      same_link(m.link, scope.space->link(scope.stratum))) {
    j["link"] = {{"of", scope.side}, {"stratum", scope.stratum.str()}};
  } else {
    j["link"] = {{"space", m.link ? space_body(*m.link) : json()}};
  }
  return j;
}

json basic_json(const BasicMorphism& f, const LinkScope& from = {}, const LinkScope& to = {}) {
  json a1 = json::array();
  for (const auto& e : f.a1) a1.push_back(expr_json(e));
  return {{"name", f.name},
          {"domain", model_json(f.domain, from)},
          {"codomain", model_json(f.codomain, to)},
          {"a1", a1},
          {"a2", expr_json(f.a2)},
          {"a3", expr_json(f.a3)}};
}

json locals_json(const std::vector<LocalMorphism>& locals, const StratMorphism& f) {
  json a = json::array();
  for (const auto& l : locals) {
    LinkScope from{f.domain.get(), "domain", l.source};
    LinkScope to{f.codomain.get(), "codomain", l.target};
    a.push_back({{"source", l.source.str()},
                 {"chart", l.chart},
                 {"target", l.target.str()},
                 {"target_chart", l.target_chart},
                 {"map", basic_json(l.map, from, to)}});
  }
  return a;
}

json flags_json(const MorphismFlags& f) {
  return {{"stratified", f.stratified},
          {"embedding", f.embedding},
          {"tube_morphism", f.tube_morphism},
          {"thom_mather", f.thom_mather}};
}

json square_json(const ChartSquare& sq) {
  return {{"base", sq.base.str()},
          {"chart", sq.chart},
          {"top", model_json(sq.top)},
          {"bottom", model_json(sq.bottom)},
          {"c", basic_json(sq.c)},
          {"top_strata", id_map(sq.top_strata)}};
}

json provenance_json(const std::map<StratumId, std::vector<ProvTag>>& prov) {
  json j = json::object();
  for (const auto& [id, tags] : prov) {
    json a = json::array();
    for (const auto& t : tags) {
      json tag = {{"kind", std::string(to_string(t.kind))}, {"target", t.target.str()}};
      if (t.link_stratum) tag["link_stratum"] = t.link_stratum->str();
      a.push_back(tag);
    }
    j[id.str()] = a;
  }
  return j;
}

json unbending_json(const UnbendResult& r) {
  json tubes = json::array();
  for (const auto& t : r.tubes) {
    json halves = json::array();
    for (const auto& h : t.halves) halves.push_back({h.copy, h.t_sign});
    tubes.push_back({{"base", t.base.str()},
                     {"link", t.link ? space_body(*t.link) : json()},
                     {"charts", charts_json(t.charts, t.base)},
                     {"group", group_json(t.group)},
                     {"transitions", transitions_json(t.transitions)},
                     {"triples", triples_json(t.triples)},
                     {"fiber", id_map(t.fiber)},
                     {"halves", halves},
                     {"signed_radium", expr_json(t.signed_radium)},
                     {"length", t.length}});
  }
  json squares = json::array();
  for (const auto& sq : r.map.chart_squares) squares.push_back(square_json(sq));
  json j = header("stratcalc-unbending");
  j["source"] = space_body(*r.map.source);
  j["unbent"] = space_body(*r.unbent);
  j["identity"] = r.map.identity;
  j["order"] = id_list(r.order);
  j["provenance"] = provenance_json(r.map.provenance);
  j["tubes"] = tubes;
  j["chart_squares"] = squares;
  return j;
}

// ---------------------------------------------------------------------------
// Readers

StratumId key_id(const Node& value, const std::string& key);

LinkSample sample_at(const Node& n, std::size_t offset) {
  const auto& v = n.value();
  if (!v.is_array() || v.size() != 4) n.schema("link-map-sample", "expected [stratum, index, stratum, index]");
  auto parts = n.elements();
  return {parts[offset].id(), parts[offset + 1].integer()};
}

LinkMap read_link_map(const Node& n, const PresentedSpace* domain, const PresentedSpace* codomain) {
  LinkMap g;
  g.name = n["name"].str();
  for (const auto& [key, value] : n["strata"].members()) {
    StratumId a = key_id(value, key);
    StratumId b = value.id();
    if (domain && !domain->contains(a)) value.dangling("link-map-stratum", "unknown link stratum " + key);
    if (codomain && !codomain->contains(b)) value.dangling("link-map-stratum", "unknown link stratum " + b.str());
    g.strata.emplace(a, b);
  }
  for (const auto& e : n["samples"].elements()) {
    LinkSample a = sample_at(e, 0);
    LinkSample b = sample_at(e, 2);
    if (domain && !domain->contains(a.stratum)) e.dangling("link-map-stratum", "unknown link stratum " + a.stratum.str());
    if (codomain && !codomain->contains(b.stratum)) e.dangling("link-map-stratum", "unknown link stratum " + b.stratum.str());
    g.samples.emplace(a, b);
  }
  return g;
}

std::vector<std::string> string_tuple(const Node& n, std::size_t size, const char* rule) {
  auto parts = n.elements();
  if (parts.size() != size) n.schema(rule, "expected " + std::to_string(size) + " entries");
  std::vector<std::string> out;
  for (const auto& p : parts) out.push_back(p.str());
  return out;
}

std::vector<ChartRecord> read_charts(const Node& n, const StratumId& base) {
  std::vector<ChartRecord> out;
  std::set<std::string> seen;
  for (const auto& c : n.elements()) {
    ChartRecord r;
    r.id = c["id"].str();
    if (!seen.insert(r.id).second) c["id"].schema("unique-chart-id", "duplicate chart " + r.id);
    std::string kind = c["kind"].str();
    if (kind == "bundle") r.kind = ChartKind::BundleChart;
    else if (kind == "pseudomanifold") r.kind = ChartKind::PseudomanifoldChart;
    else c["kind"].schema("chart-kind", "unknown chart kind " + kind);
    r.base = c.has("base") ? c["base"].id() : base;
    out.push_back(r);
  }
  return out;
}

CocycleGroup read_group(const Node& n, const PresentedSpace& link) {
  CocycleGroup g;
  for (const auto& e : n["elements"].elements()) g.elements.push_back(read_link_map(e, &link, &link));
  const int order = g.order();
  for (const auto& row : n["table"].elements()) {
    std::vector<int> r;
    for (const auto& c : row.elements()) {
      int k = c.integer();
      if (k < -1 || k >= order) c.schema("group-table", "entry outside the group");
      r.push_back(k);
    }
    g.table.push_back(r);
  }
  return g;
}

struct ChartTables {
  std::vector<Transition> transitions;
  std::vector<std::array<std::string, 3>> triples;
};

ChartTables read_chart_tables(const Node& n, const std::vector<ChartRecord>& charts, const CocycleGroup& group) {
  auto known = [&](const std::string& id) {
    return std::any_of(charts.begin(), charts.end(), [&](const ChartRecord& c) { return c.id == id; });
  };
  ChartTables out;
  for (const auto& t : n["transitions"].elements()) {
    auto v = string_tuple(t, 3, "transition");
    if (!known(v[0]) || !known(v[1])) t.dangling("transition-chart", "unknown chart in transition");
    if (!group.index_of(v[2])) t.dangling("transition-element", "unknown group element " + v[2]);
    out.transitions.push_back({v[0], v[1], v[2]});
  }
  for (const auto& t : n["triples"].elements()) {
    auto v = string_tuple(t, 3, "triple");
    for (const auto& c : v) {
      if (!known(c)) t.dangling("triple-chart", "unknown chart " + c);
    }
    out.triples.push_back({v[0], v[1], v[2]});
  }
  return out;
}

std::map<StratumId, StratumId> read_fiber(const Node& n, const PresentedSpace& link, const PresentedSpace& ambient) {
  std::map<StratumId, StratumId> out;
  for (const auto& [key, value] : n.members()) {
    StratumId q = key_id(value, key);
    StratumId amb = value.id();
    if (!link.contains(q)) value.dangling("fiber", "unknown link stratum " + key);
    if (!ambient.contains(amb)) value.dangling("fiber", "unknown stratum " + amb.str());
    out.emplace(q, amb);
  }
  return out;
}

StratumId key_id(const Node& value, const std::string& key) {
  try {
    return StratumId::parse(key);
  } catch (const Error&) {
    value.schema("stratum-id", "malformed stratum id " + key);
  }
}

SpacePtr read_body(const Node& n);

Tube read_tube(const Node& n, const StratumId& base, const PresentedSpace& space,
               const std::map<StratumId, SpacePtr>& links) {
  Tube t;
  t.base = base;
  if (n.has("link")) {
    t.link = read_body(n["link"]);
  } else if (auto it = links.find(base); it != links.end()) {
    t.link = it->second;
  } else {
    n.schema("tube-link", "tube over a stratum without link");
  }
  t.charts = read_charts(n["charts"], base);
  t.group = read_group(n["group"], *t.link);
  auto tables = read_chart_tables(n, t.charts, t.group);
  t.transitions = std::move(tables.transitions);
  t.triples = std::move(tables.triples);
  t.fiber = read_fiber(n["fiber"], *t.link, space);
  if (n.has("family")) t.family = n["family"].integer();
  return t;
}

SpacePtr read_body(const Node& n) {
  std::vector<Stratum> strata;
  std::set<StratumId> ids;
  for (const auto& s : n["strata"].elements()) {
    Stratum st{s["id"].id(), s["dim"].integer(), s["label"].str(), s["samples"].integer()};
    if (!ids.insert(st.id).second) s["id"].schema("unique-stratum-id", "duplicate stratum " + st.id.str());
    strata.push_back(st);
  }
  std::vector<StratumId> order(ids.begin(), ids.end());
  auto index = [&](const StratumId& id) {
    return static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), id) - order.begin());
  };
  const std::size_t count = order.size();
  std::vector<std::vector<bool>> rel(count, std::vector<bool>(count, false));
  Node leq = n["leq"];
  for (const auto& p : leq.elements()) {
    auto v = p.elements();
    if (v.size() != 2) p.schema("leq-pair", "expected [lower, upper]");
    StratumId a = v[0].id();
    StratumId b = v[1].id();
    if (!ids.count(a)) v[0].dangling("leq-endpoint", "unknown stratum " + a.str());
    if (!ids.count(b)) v[1].dangling("leq-endpoint", "unknown stratum " + b.str());
    if (a == b) p.schema("NotAPartialOrder", "strict pair on a single stratum");
    rel[index(a)][index(b)] = true;
  }
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < count; ++i) {
      if (!rel[i][k]) continue;
      for (std::size_t j = 0; j < count; ++j) {
        if (rel[k][j]) rel[i][j] = true;
      }
    }
  }
  std::vector<std::pair<StratumId, StratumId>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    if (rel[i][i]) leq.schema("NotAPartialOrder", "incidence cycle through " + order[i].str());
    pairs.emplace_back(order[i], order[i]);
    for (std::size_t j = 0; j < count; ++j) {
      if (rel[i][j]) pairs.emplace_back(order[i], order[j]);
    }
  }

  std::map<StratumId, SpacePtr> links;
  for (const auto& [key, value] : n["links"].members()) {
    StratumId id = key_id(value, key);
    if (!ids.count(id)) value.dangling("link-stratum", "link on unknown stratum " + key);
    links.emplace(id, read_body(value));
  }

  // The tubes refer to the ambient strata, so the space is built twice: once
  // bare to resolve ids, then with its Thom-Mather structure.
  const bool compact = n["compact"].boolean();
  const bool localized = n["localized"].boolean();
  SpacePtr bare;
  try {
    bare = std::make_shared<PresentedSpace>(strata, pairs, links, TMStructure{}, compact, localized);
  } catch (const Error& e) {
    n.schema(std::string(to_string(e.code())), e.detail());
  }
  TMStructure tm;
  if (auto node = n.find("tm")) {
    for (const auto& [key, value] : (*node)["tubes"].members()) {
      StratumId base = key_id(value, key);
      if (!ids.count(base)) value.dangling("tube-base", "tube on unknown stratum " + key);
      tm.tubes.emplace(base, read_tube(value, base, *bare, links));
    }
    for (const auto& fam : (*node)["families"].elements()) {
      std::vector<StratumId> f;
      for (const auto& s : fam.elements()) {
        StratumId id = s.id();
        if (!ids.count(id)) s.dangling("family-stratum", "unknown stratum " + id.str());
        f.push_back(id);
      }
      tm.families.push_back(f);
    }
    tm.nesting_ok = (*node)["nesting_ok"].boolean();
    if (auto j = node->find("justification")) tm.justification = j->str();
  }
  return bare->with_tm(std::move(tm));
}

SmoothSpec read_smooth(const Node& n) {
  SmoothSpec m{n["label"].str(), n["dim"].integer(), n["compact"].boolean()};
  if (!is_valid_label(m.label)) n["label"].schema("label", "labels are non-empty and free of '/' and spaces");
  if (m.dim < 0) n["dim"].schema("dimension", "negative dimension");
  return m;
}

struct ParsedExpr {
  StratSpaceExpr expr;
  bool compact = false;
};

ParsedExpr read_expr(const Node& n) {
  std::string kind = n["kind"].str();
  if (kind == "smooth") {
    SmoothSpec m = read_smooth(n);
    return {StratSpaceExpr::smooth(m.label, m.dim, m.compact), m.compact};
  }
  if (kind == "product") {
    SmoothSpec m = read_smooth(n["manifold"]);
    ParsedExpr inner = read_expr(n["space"]);
    return {StratSpaceExpr::product(m, std::move(inner.expr)), m.compact && inner.compact};
  }
  if (kind == "cone") {
    Node link = n["link"];
    ParsedExpr inner = read_expr(link);
    if (!inner.compact) link.schema("cone-requires-compact", "the link of a cone must be compact");
    return {StratSpaceExpr::cone(std::move(inner.expr)), false};
  }
  if (kind == "suspension") {
    Node base = n["base"];
    ParsedExpr inner = read_expr(base);
    if (!inner.compact) base.schema("suspension-requires-compact", "only compact spaces are suspended");
    return {StratSpaceExpr::suspension(std::move(inner.expr)), true};
  }
  if (kind == "disjoint") {
    Node parts = n["parts"];
    std::vector<StratSpaceExpr> args;
    bool compact = true;
    for (const auto& p : parts.elements()) {
      ParsedExpr e = read_expr(p);
      compact = compact && e.compact;
      args.push_back(std::move(e.expr));
    }
    if (args.empty()) parts.schema("disjoint-nonempty", "disjoint union of nothing");
    return {StratSpaceExpr::disjoint(std::move(args)), compact};
  }
  if (kind == "presented") {
    SpacePtr s = read_body(n["space"]);
    return {StratSpaceExpr::given(s), s->compact()};
  }
  n["kind"].schema("expression-kind", "unknown expression kind " + kind);
}

Expr read_math(const Node& n);

Expr read_math_node(const Node& n) {
  auto parts = n.elements();
  if (parts.empty()) n.schema("expression", "empty expression");
  std::string op = parts[0].str();
  auto arity = [&](std::size_t k) {
    if (parts.size() != k + 1) n.schema("expression-arity", op + " takes " + std::to_string(k) + " arguments");
  };
  if (op == "const") {
    arity(1);
    return Expr::constant(parts[1].real());
  }
  if (op == "u") {
    arity(1);
    int i = parts[1].integer();
    if (i < 0) parts[1].schema("expression", "negative coordinate index");
    return Expr::u(i);
  }
  if (op == "r") {
    arity(0);
    return Expr::r();
  }
  if (op == "l") {
    arity(0);
    return Expr::l();
  }
  if (op == "+" || op == "*") {
    arity(2);
    Expr a = read_math(parts[1]);
    Expr b = read_math(parts[2]);
    return op == "+" ? Expr::add(a, b) : Expr::mul(a, b);
  }
  if (op == "poly") {
    arity(2);
    std::vector<double> coeffs;
    for (const auto& c : parts[1].elements()) coeffs.push_back(c.real());
    return Expr::poly(coeffs, read_math(parts[2]));
  }
  if (op == "apply") {
    arity(2);
    return Expr::apply(read_link_map(parts[1], nullptr, nullptr), read_math(parts[2]));
  }
  static const std::map<std::string, Expr (*)(Expr)> unary{
      {"neg", &Expr::neg}, {"abs", &Expr::abs}, {"sgn", &Expr::sgn},
      {"exp", &Expr::exp}, {"sin", &Expr::sin}, {"cos", &Expr::cos}};
  auto it = unary.find(op);
  if (it == unary.end()) parts[0].schema("expression-op", "unknown operator " + op);
  arity(1);
  return it->second(read_math(parts[1]));
}

Expr read_math(const Node& n) {
  try {
    return read_math_node(n);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    n.schema("expression-type", e.detail());
  }
}

struct Scopes {
  SpacePtr domain;
  SpacePtr codomain;
};

BasicModel read_model(const Node& n, const Scopes& scopes) {
  BasicModel m;
  m.u_dim = n["u_dim"].integer();
  if (m.u_dim < 0) n["u_dim"].schema("dimension", "negative dimension");
  m.cylinder = n["cylinder"].boolean();
  Node link = n["link"];
  if (link.has("of")) {
    std::string side = link["of"].str();
    StratumId id = link["stratum"].id();
    const SpacePtr& space = side == "domain" ? scopes.domain : side == "codomain" ? scopes.codomain : nullptr;
    if (!space) link["of"].schema("link-scope", "expected \"domain\" or \"codomain\"");
    m.link = space->link(id);
    if (!m.link) link["stratum"].dangling("link-stratum", "no link at " + id.str());
  } else {
    m.link = read_body(link["space"]);
  }
  return m;
}

BasicMorphism read_basic(const Node& n, const Scopes& scopes) {
  BasicMorphism f;
  f.name = n["name"].str();
  f.domain = read_model(n["domain"], scopes);
  f.codomain = read_model(n["codomain"], scopes);
  for (const auto& e : n["a1"].elements()) f.a1.push_back(read_math(e));
  f.a2 = read_math(n["a2"]);
  f.a3 = read_math(n["a3"]);
  return f;
}

std::vector<LocalMorphism> read_locals(const Node& n, const Scopes& scopes, bool check_strata) {
  std::vector<LocalMorphism> out;
  for (const auto& l : n.elements()) {
    LocalMorphism m;
    m.source = l["source"].id();
    m.target = l["target"].id();
    if (check_strata && !scopes.domain->contains(m.source)) l["source"].dangling("local-stratum", "unknown stratum " + m.source.str());
    if (check_strata && !scopes.codomain->contains(m.target)) l["target"].dangling("local-stratum", "unknown stratum " + m.target.str());
    m.chart = l["chart"].str();
    m.target_chart = l["target_chart"].str();
    m.map = read_basic(l["map"], scopes);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public interface

SpaceDocument parse_space(std::string_view text) {
  json j = parse_json(text);
  Node root(text, j, "");
  check_header(root, "stratcalc-space");
  SpaceDocument doc;
  if (root.has("expr")) {
    doc.samples = root["samples"].integer();
    if (doc.samples <= 0) root["samples"].schema("samples", "sample count must be positive");
    doc.expr = read_expr(root["expr"]).expr;
    try {
      doc.space = present(*doc.expr, doc.samples);
    } catch (const Error& e) {
      root["expr"].schema(std::string(to_string(e.code())), e.detail());
    }
  } else {
    doc.space = read_body(root["space"]);
  }
  return doc;
}

StratMorphism parse_morphism(std::string_view text) {
  json j = parse_json(text);
  Node root(text, j, "");
  check_header(root, "stratcalc-morphism");
  Node body = root["morphism"];
  StratMorphism f;
  f.name = body["name"].str();
  f.domain = read_body(body["domain"]);
  f.codomain = read_body(body["codomain"]);
  for (const auto& [key, value] : body["stratum_map"].members()) {
    StratumId a = key_id(value, key);
    StratumId b = value.id();
    if (!f.domain->contains(a)) value.dangling("stratum-map", "unknown domain stratum " + key);
    if (!f.codomain->contains(b)) value.dangling("stratum-map", "unknown codomain stratum " + b.str());
    f.stratum_map.emplace(a, b);
  }
  Node flags = body["flags"];
  f.flags = {flags["stratified"].boolean(), flags["embedding"].boolean(), flags["tube_morphism"].boolean(),
             flags["thom_mather"].boolean()};
  Scopes scopes{f.domain, f.codomain};
  f.locals = read_locals(body["locals"], scopes, true);
  f.cylinder_locals = read_locals(body["cylinder_locals"], scopes, false);
  return f;
}

std::string write_space(const StratSpaceExpr& expr, int samples) {
  json j = header("stratcalc-space");
  j["samples"] = samples;
  j["expr"] = expr_json(expr);
  return canonical(j);
}

std::string write_space(const PresentedSpace& space) {
  json j = header("stratcalc-space");
  j["space"] = space_body(space);
  return canonical(j);
}

std::string write_space(const SpaceDocument& doc) {
  if (doc.expr) return write_space(*doc.expr, doc.samples);
  return write_space(*doc.space);
}

std::string write_morphism(const StratMorphism& f) {
  json body = {{"name", f.name},
               {"domain", f.domain ? space_body(*f.domain) : json()},
               {"codomain", f.codomain ? space_body(*f.codomain) : json()},
               {"stratum_map", id_map(f.stratum_map)},
               {"flags", flags_json(f.flags)},
               {"locals", locals_json(f.locals, f)},
               {"cylinder_locals", locals_json(f.cylinder_locals, f)}};
  json j = header("stratcalc-morphism");
  j["morphism"] = body;
  return canonical(j);
}

std::string write_unbending(const UnbendResult& result) { return canonical(unbending_json(result)); }

std::string write_unfolding(const UnfoldResult& result) {
  json composite = json::object();
  for (const auto& [id, words] : result.composite.provenance) {
    json a = json::array();
    for (const auto& w : words) a.push_back({{"target", w.target.str()}, {"word", w.word}});
    composite[id.str()] = a;
  }
  json orders = json::array();
  for (const auto& step : result.trace) orders.push_back(id_list(step.order));
  json squares = json::array();
  for (const auto& sq : result.chart_squares) squares.push_back(square_json(sq));
  json j = header("stratcalc-unfolding");
  j["source"] = space_body(*result.source);
  j["final"] = space_body(*result.final);
  j["steps"] = result.steps();
  j["orders"] = orders;
  j["composite"] = composite;
  j["chart_squares"] = squares;
  return canonical(j);
}

std::string write_report(const Report& report, std::string_view subject) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"code", v.code}, {"strata", id_list(v.strata)}, {"detail", v.detail}});
  }
  json j = header("stratcalc-report");
  j["kind"] = "validation";
  j["subject"] = std::string(subject);
  j["ok"] = report.ok();
  j["violations"] = violations;
  j["notes"] = report.notes;
  return canonical(j);
}

std::string write_harness(const HarnessReport& report) {
  json laws = json::object();
  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    json& law = laws[o.law];
    if (law.is_null()) law = {{"pass", 0}, {"fail", 0}};
    law[o.pass ? "pass" : "fail"] = law[o.pass ? "pass" : "fail"].get<int>() + 1;
    json e = {{"law", o.law}, {"subject", o.subject}, {"pass", o.pass}};
    if (!o.detail.empty()) e["detail"] = o.detail;
    outcomes.push_back(e);
  }
  json excluded = json::array();
  for (const auto& [name, reason] : report.excluded) excluded.push_back({name, reason});
  json j = header("stratcalc-report");
  j["kind"] = "functor";
  j["ok"] = report.ok();
  j["laws"] = laws;
  j["outcomes"] = outcomes;
  j["excluded"] = excluded;
  return canonical(j);
}

std::string to_dot(const PresentedSpace& space, const DesingMap* map) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  auto quote = [&](const std::string& s) { return "\"" + escape(s) + "\""; };
  std::ostringstream out;
  out << "digraph strata {\n  rankdir=BT;\n";
  for (const auto& s : space.strata()) {
    std::string label = escape(s.id.str()) + "\\ndim " + std::to_string(s.dim);
    std::string prov;
    if (map) {
      if (auto it = map->provenance.find(s.id); it != map->provenance.end()) {
        for (const auto& t : it->second) {
          if (!prov.empty()) prov += ' ';
          prov += std::string(to_string(t.kind)) + ":" + t.target.str();
          if (t.link_stratum) prov += "@" + t.link_stratum->str();
        }
      }
    }
    out << "  " << quote(s.id.str()) << " [label=\"" << label << "\"";
    if (!prov.empty()) out << ", provenance=" << quote(prov);
    out << "];\n";
  }
  for (const auto& a : space.strata()) {
    for (const auto& b : space.strata()) {
      if (!space.lt(a.id, b.id)) continue;
      bool cover = std::none_of(space.strata().begin(), space.strata().end(), [&](const Stratum& c) {
        return space.lt(a.id, c.id) && space.lt(c.id, b.id);
      });
      if (cover) out << "  " << quote(a.id.str()) << " -> " << quote(b.id.str()) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace stratcalc::io
