#pragma once

#include <complex>
#include <memory>
#include <string>

namespace hardy {

// Rational expression in t and conj(t), e.g. "0.5*conj(t)/(1 - 0.3*conj(t)) + 0.1*t".
// Grammar: numbers, the imaginary unit i, the variable t, conj(...), + - * /,
// integer powers ^n and parentheses.
class Expression {
 public:
  // Throws InvalidArgument with the offending position on syntax errors.
  explicit Expression(const std::string& text);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  std::complex<double> operator()(std::complex<double> t) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace hardy
