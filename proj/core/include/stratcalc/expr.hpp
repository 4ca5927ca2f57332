#ifndef STRATCALC_EXPR_HPP
#define STRATCALC_EXPR_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratcalc/stratum.hpp"
#include "stratcalc/tubes.hpp"

namespace stratcalc {

/// Coordinates of a basic-model point: base u, link sample l, radial r
/// (written t on the unbent cylinder L x R).
struct Env {
  std::span<const double> u;
  LinkSample l;
  double r = 0.0;
};

/// Immutable expression tree over the variables u_i, l and r.
/// Nodes are shared; copying an Expr is cheap.
class Expr {
 public:
  enum class Op { Const, U, R, L, Add, Mul, Neg, Abs, Sgn, Poly, Exp, Sin, Cos, Apply };
  enum class Type { Real, Link };

  static Expr constant(double value);
  static Expr u(int index);
  static Expr r();
  static Expr l();
  static Expr add(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr neg(Expr a);
  static Expr abs(Expr a);
  static Expr sgn(Expr a);
  /// c0 + c1 x + c2 x^2 + ...
  static Expr poly(std::vector<double> coeffs, Expr x);
  static Expr exp(Expr a);
  static Expr sin(Expr a);
  static Expr cos(Expr a);
  /// Link-valued: g applied to a link-valued argument.
  static Expr apply(LinkMap g, Expr link);

  Op op() const noexcept;
  Type type() const noexcept;
  double value() const;
  int index() const;
  const std::vector<double>& coeffs() const;
  const LinkMap& map() const;
  const std::vector<Expr>& args() const;

  double eval_real(const Env& env) const;
  /// Throws LinkActionUndefined when a link map is not tabulated at the argument.
  LinkSample eval_link(const Env& env) const;

  /// True when no abs/sgn node occurs (the structural smoothness marker).
  bool is_smooth() const;
  bool uses_r() const;
  bool uses_l() const;
  /// Highest u index referenced, or -1.
  int max_u_index() const;

  bool operator==(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator-(Expr a);

/// Replaces variables. Empty optionals leave the variable in place;
/// `u` entries beyond its size are kept as well.
struct Substitution {
  std::vector<std::optional<Expr>> u;
  std::optional<Expr> r;
  std::optional<Expr> l;
};
Expr substitute(const Expr& e, const Substitution& s);

/// Local algebraic clean-up: constant folding, neutral elements,
/// abs(abs x) = abs x, sgn(x)*abs(x) = x and sgn(x)*(abs(x)*y) = x*y.
Expr simplify(const Expr& e);

/// Infix rendering for diagnostics.
std::string to_string(const Expr& e);

}  // namespace stratcalc

#endif  // STRATCALC_EXPR_HPP
