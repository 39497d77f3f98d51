#include "mplab/expression.hpp"

#include "mplab/types.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace mplab {

namespace {

using Op = Expression::Op;
using Instr = Expression::Instr;

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  std::vector<Instr> parse() {
    expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("expression \"" + src_ + "\" at offset " + std::to_string(pos_) + ": " + why);
  }

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
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        out_.push_back({Op::add});
      } else if (accept('-')) {
        term();
        out_.push_back({Op::sub});
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        out_.push_back({Op::mul});
      } else if (accept('/')) {
        unary();
        out_.push_back({Op::div});
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      out_.push_back({Op::neg});
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  // Right associative: a^b^c = a^(b^c); -a^b = -(a^b).
  void power() {
    primary();
    if (accept('^')) {
      unary();
      out_.push_back({Op::pow});
    }
  }

  void primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (accept('(')) {
      expr();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* first = src_.data() + pos_;
      const char* last = src_.data() + src_.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - first);
      out_.push_back({Op::push, 0, value});
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      call_or_var(name);
      return;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  void call_or_var(const std::string& name) {
    if (name == "sin" || name == "cos" || name == "exp") {
      expect('(');
      expr();
      expect(')');
      out_.push_back({name == "sin" ? Op::sin : name == "cos" ? Op::cos : Op::exp});
      return;
    }
    if (name == "pow") {
      expect('(');
      expr();
      expect(',');
      expr();
      expect(')');
      out_.push_back({Op::pow});
      return;
    }
    if (name == "pi") {
      out_.push_back({Op::push, 0, std::numbers::pi});
    } else if (name == "x") {
      out_.push_back({Op::var_x});
    } else if (name == "y") {
      out_.push_back({Op::var_y});
    } else if (name == "t") {
      out_.push_back({Op::var_t});
    } else if (name.size() == 2 && name[0] == 'v' && name[1] >= '0' && name[1] <= '3') {
      out_.push_back({Op::var_v, name[1] - '0'});
    } else {
      fail("unknown identifier '" + name + "'");
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  std::vector<Instr> out_;
};

int stack_depth(const std::vector<Instr>& program) {
  int depth = 0;
  int max_depth = 0;
  for (const auto& ins : program) {
    switch (ins.op) {
      case Op::push:
      case Op::var_x:
      case Op::var_y:
      case Op::var_t:
      case Op::var_v:
        ++depth;
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow:
        --depth;
        break;
      default:
        break;
    }
    max_depth = std::max(max_depth, depth);
  }
  return max_depth;
}

}  // namespace

Expression::Expression(std::string source) : source_(std::move(source)) {
  program_ = Parser(source_).parse();
  max_depth_ = stack_depth(program_);
  if (max_depth_ > 64) throw DomainError("expression \"" + source_ + "\" is nested too deeply");
}

double Expression::operator()(const ExprVars& vars) const {
  std::array<double, 64> stack;
  int top = -1;
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::push:
        stack[++top] = ins.value;
        break;
      case Op::var_x:
        stack[++top] = vars.x;
        break;
      case Op::var_y:
        stack[++top] = vars.y;
        break;
      case Op::var_t:
        stack[++top] = vars.t;
        break;
      case Op::var_v:
        stack[++top] = vars.v[static_cast<std::size_t>(ins.index)];
        break;
      case Op::add:
        stack[top - 1] += stack[top];
        --top;
        break;
      case Op::sub:
        stack[top - 1] -= stack[top];
        --top;
        break;
      case Op::mul:
        stack[top - 1] *= stack[top];
        --top;
        break;
      case Op::div:
        stack[top - 1] /= stack[top];
        --top;
        break;
      case Op::pow: {
        const double e = stack[top];
        const double b = stack[top - 1];
        // Integer exponents by repeated multiplication keep v^2 bitwise equal to v*v.
        if (e == 2.0) {
          stack[top - 1] = b * b;
        } else {
          stack[top - 1] = std::pow(b, e);
        }
        --top;
        break;
      }
      case Op::neg:
        stack[top] = -stack[top];
        break;
      case Op::sin:
        stack[top] = std::sin(stack[top]);
        break;
      case Op::cos:
        stack[top] = std::cos(stack[top]);
        break;
      case Op::exp:
        stack[top] = std::exp(stack[top]);
        break;
    }
  }
  return stack[0];
}

bool Expression::uses(const std::string& name) const {
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::var_x:
        if (name == "x") return true;
        break;
      case Op::var_y:
        if (name == "y") return true;
        break;
      case Op::var_t:
        if (name == "t") return true;
        break;
      case Op::var_v:
        if (name == "v" + std::to_string(ins.index)) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

bool Expression::is_zero() const {
  return program_.size() == 1 && program_[0].op == Op::push && program_[0].value == 0.0;
}

}  // namespace mplab
