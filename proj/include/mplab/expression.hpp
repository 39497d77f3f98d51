#pragma once

#include <array>
#include <string>
#include <vector>

namespace mplab {

/// Values an expression may refer to: fiber components v0..v3, spatial coordinates x, y and time t.
struct ExprVars {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  std::array<double, 4> v{};
};

/// Compiled arithmetic expression.
///
/// Grammar: numbers, the variables above, the constant `pi`, binary + - * / ^,
/// unary minus, parentheses and the functions sin, cos, exp, pow(a, b).
/// Compiled once to a postfix program; evaluation never allocates.
class Expression {
 public:
  Expression() : Expression("0") {}
  explicit Expression(std::string source);

  double operator()(const ExprVars& vars) const;

  const std::string& source() const { return source_; }

  /// True if the expression mentions the named variable ("x", "y", "t", "v0", ...).
  bool uses(const std::string& name) const;
  /// True for expressions that are a literal zero.
  bool is_zero() const;

  bool operator==(const Expression& other) const { return source_ == other.source_; }

  enum class Op : unsigned char { push, var_x, var_y, var_t, var_v, add, sub, mul, div, pow, neg, sin, cos, exp };
  struct Instr {
    Op op;
    int index = 0;
    double value = 0.0;
  };

 private:
  std::string source_;
  std::vector<Instr> program_;
  int max_depth_ = 0;
};

}  // namespace mplab
