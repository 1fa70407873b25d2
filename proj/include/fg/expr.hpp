#pragma once

#include <memory>
#include <string>

namespace fg {

// Closed-form scalar expression in the coordinates x, y.
//
// Grammar: numbers, x, y, pi, e, + - * / ^ (right-associative), unary minus,
// parentheses and the functions sin cos tan exp log sqrt abs sinh cosh tanh.
// Parsing throws ConfigError with the offending column.
class Expression {
 public:
  struct Node;

  explicit Expression(const std::string& source);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(double x, double y = 0.0) const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace fg
