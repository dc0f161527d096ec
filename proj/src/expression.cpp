#include "srgeo/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace srgeo {

enum class Op { Const, X1, X2, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Sqrt };

struct Expression::Node {
  Op op;
  double constant = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_const(double c) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Const;
  n->constant = c;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression '" + s_ + "': " + what + " at position " +
                          std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, lhs, term());
      else if (accept('-')) lhs = make(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x1") return make(Op::X1);
      if (id == "x2") return make(Op::X2);
      if (id == "pi") return make_const(std::numbers::pi);
      static const std::vector<std::pair<std::string, Op>> funcs = {
          {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan}, {"sinh", Op::Sinh},
          {"cosh", Op::Cosh}, {"tanh", Op::Tanh}, {"exp", Op::Exp}, {"sqrt", Op::Sqrt}};
      for (const auto& [name, op] : funcs) {
        if (id == name) {
          if (!accept('(')) fail("expected '(' after " + id);
          NodePtr arg = expr();
          if (!accept(')')) fail("expected ')'");
          return make(op, arg);
        }
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

// Chain rule helper: g(u) with derivative gp at u.
Dual chain(const Dual& u, double g, double gp) { return {g, gp * u.d1, gp * u.d2}; }

Dual eval(const Expression::Node& n, double x1, double x2) {
  switch (n.op) {
    case Op::Const: return {n.constant, 0.0, 0.0};
    case Op::X1: return {x1, 1.0, 0.0};
    case Op::X2: return {x2, 0.0, 1.0};
    case Op::Neg: {
      const Dual a = eval(*n.lhs, x1, x2);
      return {-a.v, -a.d1, -a.d2};
    }
    case Op::Add: {
      const Dual a = eval(*n.lhs, x1, x2), b = eval(*n.rhs, x1, x2);
      return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
    }
    case Op::Sub: {
      const Dual a = eval(*n.lhs, x1, x2), b = eval(*n.rhs, x1, x2);
      return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
    }
    case Op::Mul: {
      const Dual a = eval(*n.lhs, x1, x2), b = eval(*n.rhs, x1, x2);
      return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + a.v * b.d2};
    }
    case Op::Div: {
      const Dual a = eval(*n.lhs, x1, x2), b = eval(*n.rhs, x1, x2);
      const double q = a.v / b.v;
      return {q, (a.d1 - q * b.d1) / b.v, (a.d2 - q * b.d2) / b.v};
    }
    case Op::Pow: {
      const Dual a = eval(*n.lhs, x1, x2), b = eval(*n.rhs, x1, x2);
      const double v = std::pow(a.v, b.v);
      if (b.d1 == 0.0 && b.d2 == 0.0) {
        const double gp = (b.v == 0.0) ? 0.0 : b.v * std::pow(a.v, b.v - 1.0);
        return {v, gp * a.d1, gp * a.d2};
      }
      const double la = std::log(a.v);
      return {v, v * (b.d1 * la + b.v * a.d1 / a.v), v * (b.d2 * la + b.v * a.d2 / a.v)};
    }
    case Op::Sin: {
      const Dual a = eval(*n.lhs, x1, x2);
      return chain(a, std::sin(a.v), std::cos(a.v));
    }
    case Op::Cos: {
      const Dual a = eval(*n.lhs, x1, x2);
      return chain(a, std::cos(a.v), -std::sin(a.v));
    }
    case Op::Tan: {
      const Dual a = eval(*n.lhs, x1, x2);
      const double t = std::tan(a.v);
      return chain(a, t, 1.0 + t * t);
    }
    case Op::Sinh: {
      const Dual a = eval(*n.lhs, x1, x2);
      return chain(a, std::sinh(a.v), std::cosh(a.v));
    }
    case Op::Cosh: {
      const Dual a = eval(*n.lhs, x1, x2);
      return chain(a, std::cosh(a.v), std::sinh(a.v));
    }
    case Op::Tanh: {
      const Dual a = eval(*n.lhs, x1, x2);
      const double t = std::tanh(a.v);
      return chain(a, t, 1.0 - t * t);
    }
    case Op::Exp: {
      const Dual a = eval(*n.lhs, x1, x2);
      const double e = std::exp(a.v);
      return chain(a, e, e);
    }
    case Op::Sqrt: {
      const Dual a = eval(*n.lhs, x1, x2);
      const double r = std::sqrt(a.v);
      return chain(a, r, 0.5 / r);
    }
  }
  return {};
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

Dual Expression::evaluate(double x1, double x2) const { return eval(*root_, x1, x2); }

double Expression::value(double x1, double x2) const { return evaluate(x1, x2).v; }

std::array<double, 2> Expression::gradient(double x1, double x2) const {
  const Dual d = evaluate(x1, x2);
  return {d.d1, d.d2};
}

}  // namespace srgeo
