#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "trireduce/errors.hpp"

namespace trireduce {

/// Shape-level inputs an expression may reference.
enum class Variable { R1, R2, Phi, D12, D13, D23 };
inline constexpr int kVariableCount = 6;

enum class Function { Sin, Cos, Sqrt, Exp, Log, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node. `position` is the 1-based column of the
/// token that produced the node.
struct Expr {
  enum class Kind { Number, Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  double value = 0.0;       // Number, Constant
  std::string name;         // Constant
  Variable variable = Variable::R1;
  Function function = Function::Sin;
  ExprPtr lhs;              // unary operand, call argument, left operand
  ExprPtr rhs;              // right operand
  std::size_t position = 0;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found);
  const char* kind() const noexcept override { return "SyntaxError"; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::string name, std::size_t position);
  const char* kind() const noexcept override { return "UnknownIdentifier"; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Raised when evaluation leaves the real domain (division by zero, log or
/// sqrt of an out-of-range argument, non-finite result).
class DomainError : public Error {
 public:
  DomainError(const std::string& node, double value);
  const char* kind() const noexcept override { return "DomainError"; }
  double value() const { return value_; }

 private:
  double value_;
};

/// Precedence, highest first: ^ (right-assoc), unary -, * /, + -.
ExprPtr parse_expression(const std::string& text);

/// Minimal-parenthesis rendering; parse_expression(print_expression(e)) is
/// structurally equal to e.
std::string print_expression(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Values indexed by Variable.
using VariableValues = std::array<double, kVariableCount>;

double evaluate_expression(const Expr& e, const VariableValues& vars);

const char* variable_name(Variable v);
const char* function_name(Function f);

}  // namespace trireduce
