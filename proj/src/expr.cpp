#include "fg/expr.hpp"

#include "fg/error.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace fg {

struct Expression::Node {
  enum class Kind { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::VarX: return x;
      case Kind::VarY: return y;
      case Kind::Neg: return -lhs->eval(x, y);
      case Kind::Add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Kind::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Kind::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Kind::Div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Kind::Pow: {
        const double base = lhs->eval(x, y);
        const double ex = rhs->eval(x, y);
        if (ex == 2.0) return base * base;
        return std::pow(base, ex);
      }
      case Kind::Call: return fn(lhs->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->value = v;
  return n;
}

double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tan(double v) { return std::tan(v); }
double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }
double fn_sinh(double v) { return std::sinh(v); }
double fn_cosh(double v) { return std::cosh(v); }
double fn_tanh(double v) { return std::tanh(v); }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
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
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Kind::Add, n, term());
      else if (accept('-')) n = make(Kind::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Kind::Mul, n, unary());
      else if (accept('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Kind::VarX);
      if (id == "y") return make(Kind::VarY);
      if (id == "pi") return number(std::numbers::pi);
      if (id == "e") return number(std::numbers::e);
      static const std::vector<std::pair<std::string, double (*)(double)>> fns = {
          {"sin", fn_sin},   {"cos", fn_cos},   {"tan", fn_tan},   {"exp", fn_exp},
          {"log", fn_log},   {"sqrt", fn_sqrt}, {"abs", fn_abs},   {"sinh", fn_sinh},
          {"cosh", fn_cosh}, {"tanh", fn_tanh}};
      for (const auto& [name, f] : fns) {
        if (name == id) {
          if (!accept('(')) fail("expected '(' after " + id);
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Call;
          n->fn = f;
          n->lhs = expr();
          if (!accept(')')) fail("expected ')'");
          return n;
        }
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source).parse()) {}
Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace fg
