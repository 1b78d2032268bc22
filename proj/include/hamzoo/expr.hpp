#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace hamzoo {

enum class Op {
  kConst,
  kVar,
  kNeg,
  kSin,
  kCos,
  kExp,
  kLog,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,  // base ^ constant exponent
};

struct Node;

/// Immutable expression tree in the single variable x. Copies share nodes.
class Expr {
 public:
  Expr();  // the zero constant

  static Expr constant(double value);
  static Expr var();

  Op op() const;
  /// Constant value, or the exponent for kPow.
  double value() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return op() == Op::kConst; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  /// Structural equality (same ops, bit-equal constants).
  bool same_as(const Expr& other) const;

 private:
  friend Expr make_node(Op op, double value, Expr lhs, Expr rhs);
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Folding constructors: constant operands collapse, and the identities
// 0+a, a*1, a*0, a^1, a^0, -(-a) are applied. No further simplification.
Expr neg(Expr a);
Expr sin(Expr a);
Expr cos(Expr a);
Expr exp(Expr a);
Expr log(Expr a);
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr pow(Expr base, double exponent);

/// Parses infix text. Precedence: ^ (right-assoc) > unary minus > * / > + -.
/// Functions: sin cos exp log. The only variable is x.
/// Throws ParseError / UnknownSymbol.
Expr parse_expr(std::string_view source);

/// Exact derivative with respect to x, constant-folded.
Expr differentiate(const Expr& e);

/// Throws DomainError on log of a non-positive number, division by zero or
/// a fractional power of a negative base. Overflow to +-inf is returned.
double eval_expr(const Expr& e, double x);

/// Text that parse_expr reads back to a structurally identical tree.
std::string to_string(const Expr& e);

/// V(x) with its force-units derivative V'(x).
struct Potential {
  std::string source;
  Expr v;
  Expr dv;

  double value(double x) const { return eval_expr(v, x); }
  double slope(double x) const { return eval_expr(dv, x); }
};

Potential parse_potential(std::string_view source);

}  // namespace hamzoo
