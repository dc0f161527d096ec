// Small arithmetic expression language for metric coefficients.
//
// Grammar (usual precedence, '^' right-associative, unary minus):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'x1' | 'x2' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func   := sin cos tan sinh cosh tanh exp sqrt
//
// Evaluation carries first partials with respect to x1 and x2 (forward-mode
// differentiation), so charts built from expressions have analytic partials.

#ifndef SRGEO_EXPRESSION_HPP
#define SRGEO_EXPRESSION_HPP

#include <array>
#include <memory>
#include <stdexcept>
#include <string>

namespace srgeo {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Value together with its gradient in (x1, x2).
struct Dual {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

class Expression {
 public:
  struct Node;

  // Throws ExpressionError with the offending position on malformed input.
  static Expression parse(const std::string& text);

  double value(double x1, double x2) const;
  std::array<double, 2> gradient(double x1, double x2) const;
  Dual evaluate(double x1, double x2) const;

  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace srgeo

#endif  // SRGEO_EXPRESSION_HPP
