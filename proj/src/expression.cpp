#include "trireduce/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

namespace trireduce {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type;
  std::string text;
  double number = 0.0;
  std::size_t position;  // 1-based
};

std::string describe(const Token& t) {
  return t.type == Token::Type::End ? std::string("end of input") : "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (pos_ >= text_.size()) {
        out.push_back({Token::Type::End, "", 0.0, pos_ + 1});
        return out;
      }
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          ++pos_;
        }
        out.push_back({Token::Type::Ident, text_.substr(start, pos_ - start), 0.0, start + 1});
      } else {
        Token::Type type;
        switch (c) {
          case '+': type = Token::Type::Plus; break;
          case '-': type = Token::Type::Minus; break;
          case '*': type = Token::Type::Star; break;
          case '/': type = Token::Type::Slash; break;
          case '^': type = Token::Type::Caret; break;
          case '(': type = Token::Type::LParen; break;
          case ')': type = Token::Type::RParen; break;
          default:
            throw SyntaxError(pos_ + 1, {"number", "identifier", "operator", "'('", "')'"},
                              std::string("'") + c + "'");
        }
        out.push_back({type, std::string(1, c), 0.0, pos_ + 1});
        ++pos_;
      }
    }
  }

 private:
  bool digit_at(std::size_t i) const {
    return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
  }

  Token number() {
    const std::size_t start = pos_;
    while (digit_at(pos_)) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (digit_at(pos_)) ++pos_;
    }
    if (pos_ == start + 1 && text_[start] == '.') {
      throw SyntaxError(start + 1, {"digit"}, "'.'");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
      if (digit_at(k)) {
        pos_ = k;
        while (digit_at(pos_)) ++pos_;
      }
    }
    const std::string lexeme = text_.substr(start, pos_ - start);
    double value = 0.0;
    const auto res = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      throw SyntaxError(start + 1, {"finite number"}, "'" + lexeme + "'");
    }
    return {Token::Type::Number, lexeme, value, start + 1};
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

ExprPtr make_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs, std::size_t position) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  e->position = position;
  return e;
}

bool lookup_variable(const std::string& name, Variable& out) {
  static const std::pair<const char*, Variable> table[] = {
      {"r1", Variable::R1},   {"r2", Variable::R2},   {"phi", Variable::Phi},
      {"d12", Variable::D12}, {"d13", Variable::D13}, {"d23", Variable::D23}};
  for (const auto& [n, v] : table) {
    if (name == n) {
      out = v;
      return true;
    }
  }
  return false;
}

bool lookup_function(const std::string& name, Function& out) {
  static const std::pair<const char*, Function> table[] = {
      {"sin", Function::Sin},   {"cos", Function::Cos}, {"sqrt", Function::Sqrt},
      {"exp", Function::Exp},   {"log", Function::Log}, {"abs", Function::Abs}};
  for (const auto& [n, f] : table) {
    if (name == n) {
      out = f;
      return true;
    }
  }
  return false;
}

bool lookup_constant(const std::string& name, double& out) {
  if (name == "pi") {
    out = std::numbers::pi;
    return true;
  }
  if (name == "e") {
    out = std::numbers::e;
    return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (peek().type != Token::Type::End) {
      throw SyntaxError(peek().position, {"operator", "end of input"}, describe(peek()));
    }
    return e;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() { return tokens_[index_++]; }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (peek().type == Token::Type::Plus || peek().type == Token::Type::Minus) {
      const Token& op = advance();
      ExprPtr rhs = term();
      lhs = make_binary(op.type == Token::Type::Plus ? Expr::Kind::Add : Expr::Kind::Sub,
                        std::move(lhs), std::move(rhs), op.position);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (peek().type == Token::Type::Star || peek().type == Token::Type::Slash) {
      const Token& op = advance();
      ExprPtr rhs = unary();
      lhs = make_binary(op.type == Token::Type::Star ? Expr::Kind::Mul : Expr::Kind::Div,
                        std::move(lhs), std::move(rhs), op.position);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek().type == Token::Type::Minus) {
      const Token& op = advance();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Neg;
      e->lhs = unary();
      e->position = op.position;
      return e;
    }
    return power();
  }

  // Right-associative; the exponent may carry its own unary minus.
  ExprPtr power() {
    ExprPtr base = primary();
    if (peek().type == Token::Type::Caret) {
      const Token& op = advance();
      ExprPtr exponent = unary();
      return make_binary(Expr::Kind::Pow, std::move(base), std::move(exponent), op.position);
    }
    return base;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::Number: {
        advance();
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Number;
        e->value = t.number;
        e->position = t.position;
        return e;
      }
      case Token::Type::LParen: {
        advance();
        ExprPtr inner = expr();
        expect_rparen();
        return inner;
      }
      case Token::Type::Ident:
        return identifier();
      default:
        throw SyntaxError(t.position, {"number", "identifier", "'('", "'-'"}, describe(t));
    }
  }

  ExprPtr identifier() {
    const Token& t = advance();
    auto e = std::make_shared<Expr>();
    e->position = t.position;
    if (peek().type == Token::Type::LParen) {
      Function f;
      if (!lookup_function(t.text, f)) {
        throw UnknownIdentifier(t.text, t.position);
      }
      advance();
      e->kind = Expr::Kind::Call;
      e->function = f;
      e->lhs = expr();
      expect_rparen();
      return e;
    }
    Variable v;
    double c;
    Function f;
    if (lookup_variable(t.text, v)) {
      e->kind = Expr::Kind::Variable;
      e->variable = v;
    } else if (lookup_constant(t.text, c)) {
      e->kind = Expr::Kind::Constant;
      e->value = c;
      e->name = t.text;
    } else if (lookup_function(t.text, f)) {
      throw SyntaxError(peek().position, {"'('"}, describe(peek()));
    } else {
      throw UnknownIdentifier(t.text, t.position);
    }
    return e;
  }

  void expect_rparen() {
    if (peek().type != Token::Type::RParen) {
      throw SyntaxError(peek().position, {"')'", "operator"}, describe(peek()));
    }
    advance();
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_into(child, out);
  if (parens) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  const int p = precedence(e);
  switch (e.kind) {
    case Expr::Kind::Number:
      out += fmt::format("{}", e.value);
      return;
    case Expr::Kind::Constant:
      out += e.name;
      return;
    case Expr::Kind::Variable:
      out += variable_name(e.variable);
      return;
    case Expr::Kind::Call:
      out += function_name(e.function);
      out += '(';
      print_into(*e.lhs, out);
      out += ')';
      return;
    case Expr::Kind::Neg:
      out += '-';
      print_child(*e.lhs, precedence(*e.lhs) < 3, out);
      return;
    case Expr::Kind::Pow:
      print_child(*e.lhs, precedence(*e.lhs) < 5, out);
      out += '^';
      print_child(*e.rhs, precedence(*e.rhs) < 3, out);
      return;
    default: {
      const char* op = e.kind == Expr::Kind::Add   ? " + "
                       : e.kind == Expr::Kind::Sub ? " - "
                       : e.kind == Expr::Kind::Mul ? " * "
                                                   : " / ";
      print_child(*e.lhs, precedence(*e.lhs) < p, out);
      out += op;
      print_child(*e.rhs, precedence(*e.rhs) <= p, out);
      return;
    }
  }
}

[[noreturn]] void domain_fail(const Expr& e, const char* what, double value) {
  throw DomainError(fmt::format("{} at column {}", what, e.position), value);
}

double checked(const Expr& e, const char* what, double value) {
  if (!std::isfinite(value)) domain_fail(e, what, value);
  return value;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected,
                         const std::string& found)
    : ParseError(fmt::format("syntax error at column {}: expected {}, found {}", position,
                             join(expected), found),
                 position),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t position)
    : ParseError(fmt::format("unknown identifier '{}' at column {}", name, position), position),
      name_(std::move(name)) {}

DomainError::DomainError(const std::string& node, double value)
    : Error(fmt::format("domain error: {} (value {})", node, value)), value_(value) {}

ExprPtr parse_expression(const std::string& text) {
  return Parser(Lexer(text).run()).run();
}

std::string print_expression(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.value == b.value;
    case Expr::Kind::Constant: return a.name == b.name;
    case Expr::Kind::Variable: return a.variable == b.variable;
    case Expr::Kind::Neg: return structurally_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Call:
      return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

double evaluate_expression(const Expr& e, const VariableValues& vars) {
  switch (e.kind) {
    case Expr::Kind::Number:
    case Expr::Kind::Constant:
      return e.value;
    case Expr::Kind::Variable:
      return vars[static_cast<int>(e.variable)];
    case Expr::Kind::Neg:
      return -evaluate_expression(*e.lhs, vars);
    case Expr::Kind::Add:
      return checked(e, "overflow in '+'",
                     evaluate_expression(*e.lhs, vars) + evaluate_expression(*e.rhs, vars));
    case Expr::Kind::Sub:
      return checked(e, "overflow in '-'",
                     evaluate_expression(*e.lhs, vars) - evaluate_expression(*e.rhs, vars));
    case Expr::Kind::Mul:
      return checked(e, "overflow in '*'",
                     evaluate_expression(*e.lhs, vars) * evaluate_expression(*e.rhs, vars));
    case Expr::Kind::Div: {
      const double num = evaluate_expression(*e.lhs, vars);
      const double den = evaluate_expression(*e.rhs, vars);
      if (den == 0.0) domain_fail(e, "division by zero", den);
      return checked(e, "overflow in '/'", num / den);
    }
    case Expr::Kind::Pow: {
      const double base = evaluate_expression(*e.lhs, vars);
      const double exponent = evaluate_expression(*e.rhs, vars);
      if (base < 0.0 && exponent != std::floor(exponent)) {
        domain_fail(e, "negative base with non-integer exponent", base);
      }
      if (base == 0.0 && exponent < 0.0) domain_fail(e, "zero to a negative power", base);
      return checked(e, "overflow in '^'", std::pow(base, exponent));
    }
    case Expr::Kind::Call: {
      const double x = evaluate_expression(*e.lhs, vars);
      switch (e.function) {
        case Function::Sin: return std::sin(x);
        case Function::Cos: return std::cos(x);
        case Function::Abs: return std::abs(x);
        case Function::Exp: return checked(e, "overflow in exp", std::exp(x));
        case Function::Sqrt:
          if (x < 0.0) domain_fail(e, "sqrt of negative argument", x);
          return std::sqrt(x);
        case Function::Log:
          if (!(x > 0.0)) domain_fail(e, "log of non-positive argument", x);
          return std::log(x);
      }
    }
  }
  return 0.0;
}

const char* variable_name(Variable v) {
  switch (v) {
    case Variable::R1: return "r1";
    case Variable::R2: return "r2";
    case Variable::Phi: return "phi";
    case Variable::D12: return "d12";
    case Variable::D13: return "d13";
    case Variable::D23: return "d23";
  }
  return "?";
}

const char* function_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Sqrt: return "sqrt";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Abs: return "abs";
  }
  return "?";
}

}  // namespace trireduce
