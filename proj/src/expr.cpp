#include "dov/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace dov {

struct ScalarExpr::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;
using Op = ScalarExpr::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ExprError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ExprError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+')) lhs = make(Op::Add, lhs, term());
      else if (accept('-')) lhs = make(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (accept('*')) lhs = make(Op::Mul, lhs, factor());
      else if (accept('/')) lhs = make(Op::Div, lhs, factor());
      else return lhs;
    }
  }

  NodePtr factor() {
    if (accept('-')) return make(Op::Neg, factor());
    NodePtr b = base();
    if (accept('^')) return make(Op::Pow, b, factor());
    return b;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ExprError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    throw ExprError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ExprError("malformed number", start);
    return make_const(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return make(Op::Var);
    if (name == "pi") return make_const(kPi);
    if (name == "e") return make_const(std::exp(1.0));
    Op op;
    if (name == "log") op = Op::Log;
    else if (name == "exp") op = Op::Exp;
    else if (name == "sqrt") op = Op::Sqrt;
    else if (name == "pow") op = Op::Pow;
    else throw ExprError("unknown identifier '" + std::string(name) + "'", start);
    expect('(');
    NodePtr a = expr();
    if (op == Op::Pow) {
      expect(',');
      NodePtr b = expr();
      expect(')');
      return make(Op::Pow, a, b);
    }
    expect(')');
    return make(op, a);
  }
};

double eval(const NodePtr& n, double t) {
  switch (n->op) {
    case Op::Const: return n->value;
    case Op::Var: return t;
    case Op::Add: return eval(n->lhs, t) + eval(n->rhs, t);
    case Op::Sub: return eval(n->lhs, t) - eval(n->rhs, t);
    case Op::Mul: return eval(n->lhs, t) * eval(n->rhs, t);
    case Op::Div: return eval(n->lhs, t) / eval(n->rhs, t);
    case Op::Pow: return std::pow(eval(n->lhs, t), eval(n->rhs, t));
    case Op::Neg: return -eval(n->lhs, t);
    case Op::Log: return std::log(eval(n->lhs, t));
    case Op::Exp: return std::exp(eval(n->lhs, t));
    case Op::Sqrt: return std::sqrt(eval(n->lhs, t));
  }
  return std::nan("");
}

bool depends_on_t(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::Var) return true;
  return depends_on_t(n->lhs) || depends_on_t(n->rhs);
}

// Constructors with constant folding for the derivative.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value + b->value);
  return make(Op::Add, a, b);
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value - b->value);
  if (is_const(a, 0.0)) return make(Op::Neg, b);
  return make(Op::Sub, a, b);
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value * b->value);
  return make(Op::Mul, a, b);
}
NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  return make(Op::Div, a, b);
}

NodePtr diff(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: return make_const(0.0);
    case Op::Var: return make_const(1.0);
    case Op::Add: return add(diff(n->lhs), diff(n->rhs));
    case Op::Sub: return sub(diff(n->lhs), diff(n->rhs));
    case Op::Mul: return add(mul(diff(n->lhs), n->rhs), mul(n->lhs, diff(n->rhs)));
    case Op::Div:
      return div(sub(mul(diff(n->lhs), n->rhs), mul(n->lhs, diff(n->rhs))), make(Op::Pow, n->rhs, make_const(2.0)));
    case Op::Neg: {
      NodePtr d = diff(n->lhs);
      if (d->op == Op::Const) return make_const(-d->value);
      return make(Op::Neg, d);
    }
    case Op::Log: return div(diff(n->lhs), n->lhs);
    case Op::Exp: return mul(n, diff(n->lhs));
    case Op::Sqrt: return div(diff(n->lhs), mul(make_const(2.0), n));
    case Op::Pow: {
      const NodePtr& a = n->lhs;
      const NodePtr& b = n->rhs;
      if (!depends_on_t(b)) {
        // b a^(b-1) a'
        NodePtr exponent = b->op == Op::Const ? make_const(b->value - 1.0) : sub(b, make_const(1.0));
        return mul(mul(b, make(Op::Pow, a, exponent)), diff(a));
      }
      // a^b (b' log a + b a'/a)
      return mul(n, add(mul(diff(b), make(Op::Log, a)), div(mul(b, diff(a)), a)));
    }
  }
  return make_const(0.0);
}

std::string print(const NodePtr& n) {
  auto bin = [&](const char* op) { return "(" + print(n->lhs) + op + print(n->rhs) + ")"; };
  switch (n->op) {
    case Op::Const: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      std::string s(buf);
      if (n->value < 0) return "(" + s + ")";
      return s;
    }
    case Op::Var: return "t";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Pow: return bin("^");
    case Op::Neg: return "(-" + print(n->lhs) + ")";
    case Op::Log: return "log(" + print(n->lhs) + ")";
    case Op::Exp: return "exp(" + print(n->lhs) + ")";
    case Op::Sqrt: return "sqrt(" + print(n->lhs) + ")";
  }
  return "";
}

bool equal(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  if (a->op != b->op) return false;
  if (a->op == Op::Const) return a->value == b->value;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

}  // namespace

ScalarExpr::ScalarExpr(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

ScalarExpr ScalarExpr::parse(std::string_view source) {
  Parser p(source);
  return ScalarExpr(p.parse(), std::string(source));
}

ScalarExpr ScalarExpr::constant(double value) {
  auto n = make_const(value);
  return ScalarExpr(n, print(n));
}

ScalarExpr ScalarExpr::variable() { return ScalarExpr(make(Op::Var), "t"); }

double ScalarExpr::operator()(double t) const { return eval(root_, t); }

ScalarExpr ScalarExpr::derivative() const {
  auto d = diff(root_);
  return ScalarExpr(d, print(d));
}

std::string ScalarExpr::str() const { return print(root_); }

bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return equal(a.root_, b.root_); }

}  // namespace dov
