#include "stratcalc/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratcalc/error.hpp"

namespace stratcalc {

struct Expr::Node {
  Op op = Op::Const;
  Type type = Type::Real;
  double value = 0.0;
  int index = 0;
  std::vector<double> coeffs;
  LinkMap map;
  std::vector<Expr> args;
};

namespace {

void require_real(const Expr& e, const char* where) {
  if (e.type() != Expr::Type::Real) {
    throw Error(ErrorCode::InvalidInput, std::string(where) + " expects a real argument");
  }
}

}  // namespace

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->value = value;
  return Expr(n);
}

Expr Expr::u(int index) {
  if (index < 0) throw Error(ErrorCode::InvalidInput, "negative u index");
  auto n = std::make_shared<Node>();
  n->op = Op::U;
  n->index = index;
  return Expr(n);
}

Expr Expr::r() {
  auto n = std::make_shared<Node>();
  n->op = Op::R;
  return Expr(n);
}

Expr Expr::l() {
  auto n = std::make_shared<Node>();
  n->op = Op::L;
  n->type = Type::Link;
  return Expr(n);
}

Expr Expr::add(Expr a, Expr b) {
  require_real(a, "add");
  require_real(b, "add");
  auto n = std::make_shared<Node>();
  n->op = Op::Add;
  n->args = {std::move(a), std::move(b)};
  return Expr(n);
}

Expr Expr::mul(Expr a, Expr b) {
  require_real(a, "mul");
  require_real(b, "mul");
  auto n = std::make_shared<Node>();
  n->op = Op::Mul;
  n->args = {std::move(a), std::move(b)};
  return Expr(n);
}

#define STRATCALC_UNARY(fn, OP)                 \
  Expr Expr::fn(Expr a) {                       \
    require_real(a, #fn);                       \
    auto n = std::make_shared<Node>();          \
    n->op = Op::OP;                             \
    n->args.push_back(std::move(a));            \
    return Expr(n);                             \
  }

STRATCALC_UNARY(neg, Neg)
STRATCALC_UNARY(abs, Abs)
STRATCALC_UNARY(sgn, Sgn)
STRATCALC_UNARY(exp, Exp)
STRATCALC_UNARY(sin, Sin)
STRATCALC_UNARY(cos, Cos)

#undef STRATCALC_UNARY

Expr Expr::poly(std::vector<double> coeffs, Expr x) {
  require_real(x, "poly");
  if (coeffs.empty()) throw Error(ErrorCode::InvalidInput, "polynomial without coefficients");
  auto n = std::make_shared<Node>();
  n->op = Op::Poly;
  n->coeffs = std::move(coeffs);
  n->args.push_back(std::move(x));
  return Expr(n);
}

Expr Expr::apply(LinkMap g, Expr link) {
  if (link.type() != Type::Link) throw Error(ErrorCode::InvalidInput, "apply expects a link argument");
  auto n = std::make_shared<Node>();
  n->op = Op::Apply;
  n->type = Type::Link;
  n->map = std::move(g);
  n->args.push_back(std::move(link));
  return Expr(n);
}

Expr::Op Expr::op() const noexcept { return node_->op; }
Expr::Type Expr::type() const noexcept { return node_->type; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
const std::vector<double>& Expr::coeffs() const { return node_->coeffs; }
const LinkMap& Expr::map() const { return node_->map; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

double Expr::eval_real(const Env& env) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::U:
      if (static_cast<std::size_t>(n.index) >= env.u.size()) {
        throw Error(ErrorCode::SampleNotInGrid, "u_" + std::to_string(n.index) + " out of range");
      }
      return env.u[n.index];
    case Op::R: return env.r;
    case Op::Add: return n.args[0].eval_real(env) + n.args[1].eval_real(env);
    case Op::Mul: return n.args[0].eval_real(env) * n.args[1].eval_real(env);
    case Op::Neg: return -n.args[0].eval_real(env);
    case Op::Abs: return std::abs(n.args[0].eval_real(env));
    case Op::Sgn: {
      double x = n.args[0].eval_real(env);
      return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    }
    case Op::Poly: {
      double x = n.args[0].eval_real(env);
      double acc = 0.0;
      for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Op::Exp: return std::exp(n.args[0].eval_real(env));
    case Op::Sin: return std::sin(n.args[0].eval_real(env));
    case Op::Cos: return std::cos(n.args[0].eval_real(env));
    case Op::L:
    case Op::Apply: break;
  }
  throw Error(ErrorCode::InvalidInput, "link-valued expression evaluated as real");
}

LinkSample Expr::eval_link(const Env& env) const {
  const Node& n = *node_;
  if (n.op == Op::L) return env.l;
  if (n.op == Op::Apply) return n.map.apply(n.args[0].eval_link(env));
  throw Error(ErrorCode::InvalidInput, "real-valued expression evaluated as link");
}

bool Expr::is_smooth() const {
  if (node_->op == Op::Abs || node_->op == Op::Sgn) return false;
  for (const auto& a : node_->args) {
    if (!a.is_smooth()) return false;
  }
  return true;
}

bool Expr::uses_r() const {
  if (node_->op == Op::R) return true;
  for (const auto& a : node_->args) {
    if (a.uses_r()) return true;
  }
  return false;
}

bool Expr::uses_l() const {
  if (node_->op == Op::L) return true;
  for (const auto& a : node_->args) {
    if (a.uses_l()) return true;
  }
  return false;
}

int Expr::max_u_index() const {
  int best = node_->op == Op::U ? node_->index : -1;
  for (const auto& a : node_->args) best = std::max(best, a.max_u_index());
  return best;
}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value;
    case Op::U: return a.index == b.index;
    case Op::Poly:
      if (a.coeffs != b.coeffs) return false;
      break;
    case Op::Apply:
      if (!a.map.same_action(b.map)) return false;
      break;
    default: break;
  }
  return a.args == b.args;
}

Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::Add: return Expr::add(args[0], args[1]);
    case Op::Mul: return Expr::mul(args[0], args[1]);
    case Op::Neg: return Expr::neg(args[0]);
    case Op::Abs: return Expr::abs(args[0]);
    case Op::Sgn: return Expr::sgn(args[0]);
    case Op::Poly: return Expr::poly(e.coeffs(), args[0]);
    case Op::Exp: return Expr::exp(args[0]);
    case Op::Sin: return Expr::sin(args[0]);
    case Op::Cos: return Expr::cos(args[0]);
    case Op::Apply: return Expr::apply(e.map(), args[0]);
    default: return e;
  }
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& s) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::U:
      if (static_cast<std::size_t>(e.index()) < s.u.size() && s.u[e.index()]) return *s.u[e.index()];
      return e;
    case Op::R: return s.r ? *s.r : e;
    case Op::L: return s.l ? *s.l : e;
    case Op::Const: return e;
    default: break;
  }
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(substitute(a, s));
  return rebuild(e, std::move(args));
}

namespace {

bool is_const(const Expr& e, double v) { return e.op() == Expr::Op::Const && e.value() == v; }
bool is_const(const Expr& e) { return e.op() == Expr::Op::Const; }

}  // namespace

Expr simplify(const Expr& e) {
  using Op = Expr::Op;
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(simplify(a));
  bool all_const = e.type() == Expr::Type::Real &&
                   std::all_of(args.begin(), args.end(), [](const Expr& a) { return is_const(a); });
  Expr out = rebuild(e, args);
  if (all_const) {
    double u_dummy = 0.0;
    return Expr::constant(out.eval_real(Env{std::span<const double>(&u_dummy, 0), {}, 0.0}));
  }
  switch (e.op()) {
    case Op::Add:
      if (is_const(args[0], 0.0)) return args[1];
      if (is_const(args[1], 0.0)) return args[0];
      break;
    case Op::Mul: {
      if (is_const(args[0], 0.0) || is_const(args[1], 0.0)) return Expr::constant(0.0);
      if (is_const(args[0], 1.0)) return args[1];
      if (is_const(args[1], 1.0)) return args[0];
      if (is_const(args[0], -1.0)) return simplify(Expr::neg(args[1]));
      if (is_const(args[1], -1.0)) return simplify(Expr::neg(args[0]));
      for (int k = 0; k < 2; ++k) {
        const Expr& s = args[k];
        const Expr& o = args[1 - k];
        if (s.op() != Op::Sgn) continue;
        const Expr& x = s.args()[0];
        if (o.op() == Op::Abs && o.args()[0] == x) return x;
        if (o.op() == Op::Mul) {
          for (int j = 0; j < 2; ++j) {
            const Expr& f = o.args()[j];
            if (f.op() == Op::Abs && f.args()[0] == x) return simplify(Expr::mul(x, o.args()[1 - j]));
          }
        }
      }
      if (args[0].op() == Op::Neg) return simplify(Expr::neg(Expr::mul(args[0].args()[0], args[1])));
      if (args[1].op() == Op::Neg) return simplify(Expr::neg(Expr::mul(args[0], args[1].args()[0])));
      break;
    }
    case Op::Neg:
      if (args[0].op() == Op::Neg) return args[0].args()[0];
      break;
    case Op::Abs:
      if (args[0].op() == Op::Abs) return args[0];
      break;
    case Op::Poly: {
      const auto& c = e.coeffs();
      if (c.size() == 1) return Expr::constant(c[0]);
      if (c.size() == 2 && c[0] == 0.0 && c[1] == 1.0) return args[0];
      break;
    }
    default: break;
  }
  return out;
}

namespace {

void render(std::ostream& os, const Expr& e) {
  using Op = Expr::Op;
  const auto& a = e.args();
  switch (e.op()) {
    case Op::Const: os << e.value(); return;
    case Op::U: os << "u" << e.index(); return;
    case Op::R: os << "r"; return;
    case Op::L: os << "l"; return;
    case Op::Add: os << "("; render(os, a[0]); os << " + "; render(os, a[1]); os << ")"; return;
    case Op::Mul: os << "("; render(os, a[0]); os << " * "; render(os, a[1]); os << ")"; return;
    case Op::Neg: os << "-"; render(os, a[0]); return;
    case Op::Abs: os << "|"; render(os, a[0]); os << "|"; return;
    case Op::Sgn: os << "sgn("; render(os, a[0]); os << ")"; return;
    case Op::Poly: {
      os << "poly[";
      for (std::size_t i = 0; i < e.coeffs().size(); ++i) os << (i ? "," : "") << e.coeffs()[i];
      os << "](";
      render(os, a[0]);
      os << ")";
      return;
    }
    case Op::Exp: os << "exp("; render(os, a[0]); os << ")"; return;
    case Op::Sin: os << "sin("; render(os, a[0]); os << ")"; return;
    case Op::Cos: os << "cos("; render(os, a[0]); os << ")"; return;
    case Op::Apply: os << e.map().name << "("; render(os, a[0]); os << ")"; return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  render(os, e);
  return os.str();
}

}  // namespace stratcalc
