#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace tw {

using cplx = std::complex<double>;

// Value and first derivative with respect to the path variable.
struct Dual {
  cplx v;
  cplx d;
};

// Arithmetic formula in one complex variable: numbers, the variable name,
// + - * / (ASCII or the Unicode minus, times, divide signs), unary minus,
// parentheses, the imaginary unit i and powers with a rational constant
// exponent such as x^(2/3).
// Non-integer powers use the principal branch.
class Expr {
 public:
  static Expr parse(const std::string& text, const std::string& variable);
  static Expr constant(cplx c);

  cplx eval(cplx x) const { return eval_dual(x).v; }
  Dual eval_dual(cplx x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace tw
