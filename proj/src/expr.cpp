#include "hamzoo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "hamzoo/error.hpp"

namespace hamzoo {

struct Node {
  Op op;
  double value;
  Expr lhs;
  Expr rhs;
};

Expr make_node(Op op, double value, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(
      Node{op, value, std::move(lhs), std::move(rhs)}));
}

// A null node is the zero constant; leaves hold null children.
Expr::Expr() = default;

Expr Expr::constant(double value) {
  return make_node(Op::kConst, value, Expr(), Expr());
}

Expr Expr::var() { return make_node(Op::kVar, 0.0, Expr(), Expr()); }

Op Expr::op() const { return node_ ? node_->op : Op::kConst; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

bool Expr::same_as(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op()) return false;
  switch (op()) {
    case Op::kConst:
      return value() == other.value() &&
             std::signbit(value()) == std::signbit(other.value());
    case Op::kVar:
      return true;
    case Op::kNeg:
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
    case Op::kLog:
      return lhs().same_as(other.lhs());
    case Op::kPow:
      return value() == other.value() && lhs().same_as(other.lhs());
    default:
      return lhs().same_as(other.lhs()) && rhs().same_as(other.rhs());
  }
}

// --- folding constructors ---------------------------------------------------

namespace {

Expr unary(Op op, Expr a) { return make_node(op, 0.0, std::move(a), Expr()); }
Expr binary(Op op, Expr a, Expr b) {
  return make_node(op, 0.0, std::move(a), std::move(b));
}

}  // namespace

Expr neg(Expr a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::kNeg) return a.lhs();
  return unary(Op::kNeg, std::move(a));
}

Expr sin(Expr a) {
  if (a.is_constant()) return Expr::constant(std::sin(a.value()));
  return unary(Op::kSin, std::move(a));
}

Expr cos(Expr a) {
  if (a.is_constant()) return Expr::constant(std::cos(a.value()));
  return unary(Op::kCos, std::move(a));
}

Expr exp(Expr a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.value()));
  return unary(Op::kExp, std::move(a));
}

Expr log(Expr a) {
  // log of a non-positive constant is left unfolded so evaluation reports it
  if (a.is_constant() && a.value() > 0.0) {
    return Expr::constant(std::log(a.value()));
  }
  return unary(Op::kLog, std::move(a));
}

Expr operator+(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) {
    return Expr::constant(a.value() + b.value());
  }
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return binary(Op::kAdd, std::move(a), std::move(b));
}

Expr operator-(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) {
    return Expr::constant(a.value() - b.value());
  }
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return neg(std::move(b));
  return binary(Op::kSub, std::move(a), std::move(b));
}

Expr operator*(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) {
    return Expr::constant(a.value() * b.value());
  }
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return neg(std::move(b));
  if (b.is_constant(-1.0)) return neg(std::move(a));
  // c1 * (c2 * e) -> (c1*c2) * e
  if (a.is_constant() && b.op() == Op::kMul && b.lhs().is_constant()) {
    return Expr::constant(a.value() * b.lhs().value()) * b.rhs();
  }
  return binary(Op::kMul, std::move(a), std::move(b));
}

Expr operator/(Expr a, Expr b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
    return Expr::constant(a.value() / b.value());
  }
  if (a.is_constant(0.0) && !b.is_constant()) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return binary(Op::kDiv, std::move(a), std::move(b));
}

Expr pow(Expr base, double exponent) {
  if (exponent == 0.0) return Expr::constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    const double folded = std::pow(base.value(), exponent);
    if (std::isfinite(folded)) return Expr::constant(folded);
  }
  return make_node(Op::kPow, exponent, std::move(base), Expr());
}

// --- parser -------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != src_.size()) {
      throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    }
    return e;
  }

 private:
  // Raw (unfolded) builders so the parsed tree mirrors the text.
  static Expr raw_unary(Op op, Expr a) {
    return make_node(op, 0.0, std::move(a), Expr());
  }
  static Expr raw_binary(Op op, Expr a, Expr b) {
    return make_node(op, 0.0, std::move(a), std::move(b));
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
            src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = raw_binary(Op::kAdd, lhs, parse_product());
      } else if (accept('-')) {
        lhs = raw_binary(Op::kSub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = raw_binary(Op::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = raw_binary(Op::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) {
      Expr operand = parse_unary();
      // a bare literal absorbs its sign so printed negative constants
      // round-trip to the same leaf
      if (operand.is_constant()) return Expr::constant(-operand.value());
      return raw_unary(Op::kNeg, operand);
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_space();
    const std::size_t at = pos_;
    if (accept('^')) {
      // right-assoc: the exponent may itself be a power or signed literal
      Expr exponent = parse_unary();
      const double value = fold_constant(exponent, at);
      return make_node(Op::kPow, value, base, Expr());
    }
    return base;
  }

  static bool depends_on_x(const Expr& e) {
    switch (e.op()) {
      case Op::kConst:
        return false;
      case Op::kVar:
        return true;
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul:
      case Op::kDiv:
        return depends_on_x(e.lhs()) || depends_on_x(e.rhs());
      default:
        return depends_on_x(e.lhs());
    }
  }

  static double fold_constant(const Expr& e, std::size_t at) {
    if (depends_on_x(e)) throw ParseError(at, "exponent must be constant");
    try {
      return eval_expr(e, 0.0);
    } catch (const DomainError& err) {
      throw ParseError(at, std::string("bad exponent: ") + err.what());
    }
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "x") return Expr::var();
      Op fn;
      if (name == "sin") {
        fn = Op::kSin;
      } else if (name == "cos") {
        fn = Op::kCos;
      } else if (name == "exp") {
        fn = Op::kExp;
      } else if (name == "log") {
        fn = Op::kLog;
      } else {
        throw UnknownSymbol(start, std::string(name));
      }
      if (!accept('(')) throw ParseError(pos_, "expected '(' after function");
      Expr arg = parse_sum();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return raw_unary(fn, arg);
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  Expr parse_number() {
    double value = 0.0;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
      throw ParseError(pos_, "number out of range");
    }
    if (ec != std::errc() || ptr == first) {
      throw ParseError(pos_, "malformed number");
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view source) { return Parser(source).parse(); }

// --- calculus -----------------------------------------------------------------

Expr differentiate(const Expr& e) {
  switch (e.op()) {
    case Op::kConst:
      return Expr::constant(0.0);
    case Op::kVar:
      return Expr::constant(1.0);
    case Op::kNeg:
      return neg(differentiate(e.lhs()));
    case Op::kSin:
      return cos(e.lhs()) * differentiate(e.lhs());
    case Op::kCos:
      return neg(sin(e.lhs())) * differentiate(e.lhs());
    case Op::kExp:
      return exp(e.lhs()) * differentiate(e.lhs());
    case Op::kLog:
      return differentiate(e.lhs()) / e.lhs();
    case Op::kAdd:
      return differentiate(e.lhs()) + differentiate(e.rhs());
    case Op::kSub:
      return differentiate(e.lhs()) - differentiate(e.rhs());
    case Op::kMul:
      return differentiate(e.lhs()) * e.rhs() + e.lhs() * differentiate(e.rhs());
    case Op::kDiv: {
      const Expr& f = e.lhs();
      const Expr& g = e.rhs();
      return (differentiate(f) * g - f * differentiate(g)) / pow(g, 2.0);
    }
    case Op::kPow: {
      const double n = e.value();
      return Expr::constant(n) * pow(e.lhs(), n - 1.0) *
             differentiate(e.lhs());
    }
  }
  return Expr::constant(0.0);
}

double eval_expr(const Expr& e, double x) {
  switch (e.op()) {
    case Op::kConst:
      return e.value();
    case Op::kVar:
      return x;
    case Op::kNeg:
      return -eval_expr(e.lhs(), x);
    case Op::kSin:
      return std::sin(eval_expr(e.lhs(), x));
    case Op::kCos:
      return std::cos(eval_expr(e.lhs(), x));
    case Op::kExp:
      return std::exp(eval_expr(e.lhs(), x));
    case Op::kLog: {
      const double a = eval_expr(e.lhs(), x);
      if (!(a > 0.0)) {
        throw DomainError("log of non-positive argument " + std::to_string(a));
      }
      return std::log(a);
    }
    case Op::kAdd:
      return eval_expr(e.lhs(), x) + eval_expr(e.rhs(), x);
    case Op::kSub:
      return eval_expr(e.lhs(), x) - eval_expr(e.rhs(), x);
    case Op::kMul:
      return eval_expr(e.lhs(), x) * eval_expr(e.rhs(), x);
    case Op::kDiv: {
      const double den = eval_expr(e.rhs(), x);
      if (den == 0.0) throw DomainError("division by zero");
      return eval_expr(e.lhs(), x) / den;
    }
    case Op::kPow: {
      const double base = eval_expr(e.lhs(), x);
      const double n = e.value();
      if (base < 0.0 && n != std::trunc(n)) {
        throw DomainError("fractional power of negative base");
      }
      if (base == 0.0 && n < 0.0) throw DomainError("division by zero");
      return std::pow(base, n);
    }
  }
  return 0.0;
}

// --- printer ------------------------------------------------------------------

namespace {

// Binding strength used to decide parentheses.
int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::kAdd:
    case Op::kSub:
      return 1;
    case Op::kMul:
    case Op::kDiv:
      return 2;
    case Op::kNeg:
      return 3;
    case Op::kPow:
      return 4;
    case Op::kConst:
      return std::signbit(e.value()) ? 3 : 5;
    default:
      return 5;
  }
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& e, int min_precedence, std::string& out) {
  if (precedence(e) < min_precedence) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::kConst:
      out += number(e.value());
      return;
    case Op::kVar:
      out += 'x';
      return;
    case Op::kNeg:
      out += '-';
      print_child(e.lhs(), 4, out);
      return;
    case Op::kSin:
    case Op::kCos:
    case Op::kExp:
    case Op::kLog:
      out += e.op() == Op::kSin   ? "sin("
             : e.op() == Op::kCos ? "cos("
             : e.op() == Op::kExp ? "exp("
                                  : "log(";
      print(e.lhs(), out);
      out += ')';
      return;
    case Op::kAdd:
    case Op::kSub: {
      print_child(e.lhs(), 1, out);
      out += e.op() == Op::kAdd ? " + " : " - ";
      print_child(e.rhs(), 2, out);
      return;
    }
    case Op::kMul:
    case Op::kDiv:
      print_child(e.lhs(), 2, out);
      out += e.op() == Op::kMul ? '*' : '/';
      print_child(e.rhs(), 3, out);
      return;
    case Op::kPow:
      print_child(e.lhs(), 5, out);
      out += '^';
      if (std::signbit(e.value())) {
        out += '(' + number(e.value()) + ')';
      } else {
        out += number(e.value());
      }
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

Potential parse_potential(std::string_view source) {
  Potential pot;
  pot.source = std::string(source);
  pot.v = parse_expr(source);
  pot.dv = differentiate(pot.v);
  return pot;
}

}  // namespace hamzoo
