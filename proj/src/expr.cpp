#include "lieint/expr.hpp"

#include "lieint/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

namespace lieint {

struct Expression::Node {
  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Expression Expression::make(Kind kind, double value, std::string name, Expression a, Expression b) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->value = value;
  node->name = std::move(name);
  node->a = std::move(a.node_);
  node->b = std::move(b.node_);
  return Expression(std::move(node));
}

Expression::Expression() : Expression(number(0.0)) {}

Expression Expression::number(double value) {
  auto node = std::make_shared<Node>();
  node->value = value;
  return Expression(std::move(node));
}

Expression Expression::variable(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Variable;
  node->name = std::move(name);
  return Expression(std::move(node));
}

Expression::Kind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
Expression Expression::lhs() const { return Expression(node_->a); }
Expression Expression::rhs() const { return Expression(node_->b); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression::make(Expression::Kind::Add, 0.0, {}, a, b);
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::make(Expression::Kind::Sub, 0.0, {}, a, b);
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::make(Expression::Kind::Mul, 0.0, {}, a, b);
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::make(Expression::Kind::Div, 0.0, {}, a, b);
}
Expression operator-(const Expression& a) { return Expression::make(Expression::Kind::Negate, 0.0, {}, a, {}); }
Expression pow(const Expression& base, double exponent) {
  return Expression::make(Expression::Kind::Pow, exponent, {}, base, {});
}
Expression sin(const Expression& a) { return Expression::make(Expression::Kind::Sin, 0.0, {}, a, {}); }
Expression cos(const Expression& a) { return Expression::make(Expression::Kind::Cos, 0.0, {}, a, {}); }
Expression exp(const Expression& a) { return Expression::make(Expression::Kind::Exp, 0.0, {}, a, {}); }
Expression sqrt(const Expression& a) { return Expression::make(Expression::Kind::Sqrt, 0.0, {}, a, {}); }

namespace {

using Kind = Expression::Kind;
using Lookup = std::function<double(std::string_view)>;

double eval_node(const Expression& e, const Lookup& lookup) {
  switch (e.kind()) {
    case Kind::Number:
      return e.value();
    case Kind::Variable:
      return lookup(e.name());
    case Kind::Negate:
      return -eval_node(e.lhs(), lookup);
    case Kind::Add:
      return eval_node(e.lhs(), lookup) + eval_node(e.rhs(), lookup);
    case Kind::Sub:
      return eval_node(e.lhs(), lookup) - eval_node(e.rhs(), lookup);
    case Kind::Mul:
      return eval_node(e.lhs(), lookup) * eval_node(e.rhs(), lookup);
    case Kind::Div: {
      const double num = eval_node(e.lhs(), lookup);
      const double den = eval_node(e.rhs(), lookup);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Kind::Pow: {
      const double base = eval_node(e.lhs(), lookup);
      const double r = std::pow(base, e.value());
      if (!std::isfinite(r) && std::isfinite(base)) {
        throw DomainError("power " + std::to_string(base) + "^" + std::to_string(e.value()) + " is undefined");
      }
      return r;
    }
    case Kind::Sin:
      return std::sin(eval_node(e.lhs(), lookup));
    case Kind::Cos:
      return std::cos(eval_node(e.lhs(), lookup));
    case Kind::Exp:
      return std::exp(eval_node(e.lhs(), lookup));
    case Kind::Sqrt: {
      const double x = eval_node(e.lhs(), lookup);
      if (x < 0.0) throw DomainError("sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
    }
  }
  return 0.0;
}

void collect(const Expression& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Kind::Number:
      return;
    case Kind::Variable:
      out.insert(e.name());
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
      return;
    default:
      collect(e.lhs(), out);
  }
}

// ---------------------------------------------------------------------------
// Tokenizer / recursive-descent parser

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok type;
  std::size_t column;  // 1-based
  double number = 0.0;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t column = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          j = k;
        }
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, value);
      if (ec != std::errc() || ptr != s.data() + j || !std::isfinite(value)) {
        throw SyntaxError("malformed number '" + std::string(s.substr(i, j - i)) + "'", column);
      }
      out.push_back({Tok::Number, column, value, {}});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Name, column, 0.0, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    Tok type;
    switch (c) {
      case '+': type = Tok::Plus; break;
      case '-': type = Tok::Minus; break;
      case '*': type = Tok::Star; break;
      case '/': type = Tok::Slash; break;
      case '^': type = Tok::Caret; break;
      case '(': type = Tok::LParen; break;
      case ')': type = Tok::RParen; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", column);
    }
    out.push_back({type, column, 0.0, {}});
    ++i;
  }
  out.push_back({Tok::End, s.size() + 1, 0.0, {}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Expression parse_all() {
    Expression e = parse_expr();
    if (peek().type != Tok::End) fail("unexpected token");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    throw SyntaxError(t.type == Tok::End ? "unexpected end of input" : message, t.column);
  }

  Expression parse_expr() {
    Expression lhs = parse_term();
    while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
      const bool plus = next().type == Tok::Plus;
      Expression rhs = parse_term();
      lhs = plus ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  Expression parse_term() {
    Expression lhs = parse_unary();
    while (peek().type == Tok::Star || peek().type == Tok::Slash) {
      const bool times = next().type == Tok::Star;
      Expression rhs = parse_unary();
      lhs = times ? lhs * rhs : lhs / rhs;
    }
    return lhs;
  }

  Expression parse_unary() {
    if (peek().type == Tok::Minus) {
      next();
      return -parse_unary();
    }
    if (peek().type == Tok::Plus) {
      next();
      return parse_unary();
    }
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (peek().type != Tok::Caret) return base;
    next();
    return pow(base, parse_constant_exponent());
  }

  double parse_constant_exponent() {
    const std::size_t column = peek().column;
    const Expression e = parse_exponent();
    if (!e.free_variables().empty()) throw SyntaxError("exponent must be a constant", column);
    try {
      const double v = e.evaluate(Environment{});
      if (!std::isfinite(v)) throw SyntaxError("exponent is not finite", column);
      return v;
    } catch (const DomainError&) {
      throw SyntaxError("exponent is not a finite constant", column);
    }
  }

  Expression parse_exponent() {
    if (peek().type == Tok::Minus) {
      next();
      return -parse_exponent();
    }
    if (peek().type == Tok::Plus) {
      next();
      return parse_exponent();
    }
    return parse_power();
  }

  Expression parse_primary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Number:
        next();
        return Expression::number(t.number);
      case Tok::Name: {
        next();
        if (peek().type != Tok::LParen) return Expression::variable(t.text);
        const std::string fn = t.text;
        const std::size_t column = t.column;
        next();
        Expression arg = parse_expr();
        if (peek().type != Tok::RParen) fail("expected ')'");
        next();
        if (fn == "sin") return sin(arg);
        if (fn == "cos") return cos(arg);
        if (fn == "exp") return exp(arg);
        if (fn == "sqrt") return sqrt(arg);
        throw SyntaxError("unknown function '" + fn + "'", column);
      }
      case Tok::LParen: {
        next();
        Expression inner = parse_expr();
        if (peek().type != Tok::RParen) fail("expected ')'");
        next();
        return inner;
      }
      default:
        fail("unexpected token");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Simplifying constructors used by differentiate

Expression num(double v) { return Expression::number(v); }

Expression s_neg(const Expression& a) {
  if (a.is_number()) return num(-a.value());
  if (a.kind() == Kind::Negate) return a.lhs();
  return -a;
}

Expression s_add(const Expression& a, const Expression& b) {
  if (a.is_number() && b.is_number()) return num(a.value() + b.value());
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  return a + b;
}

Expression s_sub(const Expression& a, const Expression& b) {
  if (a.is_number() && b.is_number()) return num(a.value() - b.value());
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return s_neg(b);
  return a - b;
}

Expression s_mul(const Expression& a, const Expression& b) {
  if (a.is_number() && b.is_number()) return num(a.value() * b.value());
  if (a.is_number(0.0) || b.is_number(0.0)) return num(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return s_neg(b);
  if (b.is_number(-1.0)) return s_neg(a);
  return a * b;
}

Expression s_div(const Expression& a, const Expression& b) {
  if (a.is_number() && b.is_number() && b.value() != 0.0) return num(a.value() / b.value());
  if (a.is_number(0.0)) return num(0.0);
  if (b.is_number(1.0)) return a;
  return a / b;
}

Expression s_pow(const Expression& a, double e) {
  if (e == 1.0) return a;
  if (e == 0.0) return num(1.0);
  if (a.is_number()) {
    const double r = std::pow(a.value(), e);
    if (std::isfinite(r)) return num(r);
  }
  return pow(a, e);
}

Expression derive(const Expression& e, std::string_view var) {
  switch (e.kind()) {
    case Kind::Number:
      return num(0.0);
    case Kind::Variable:
      return num(e.name() == var ? 1.0 : 0.0);
    case Kind::Negate:
      return s_neg(derive(e.lhs(), var));
    case Kind::Add:
      return s_add(derive(e.lhs(), var), derive(e.rhs(), var));
    case Kind::Sub:
      return s_sub(derive(e.lhs(), var), derive(e.rhs(), var));
    case Kind::Mul: {
      const Expression u = e.lhs(), v = e.rhs();
      return s_add(s_mul(derive(u, var), v), s_mul(u, derive(v, var)));
    }
    case Kind::Div: {
      const Expression u = e.lhs(), v = e.rhs();
      const Expression du = derive(u, var), dv = derive(v, var);
      if (dv.is_number(0.0)) return s_div(du, v);
      return s_div(s_sub(s_mul(du, v), s_mul(u, dv)), s_pow(v, 2.0));
    }
    case Kind::Pow: {
      const Expression u = e.lhs();
      return s_mul(s_mul(num(e.value()), s_pow(u, e.value() - 1.0)), derive(u, var));
    }
    case Kind::Sin:
      return s_mul(cos(e.lhs()), derive(e.lhs(), var));
    case Kind::Cos:
      return s_mul(s_neg(sin(e.lhs())), derive(e.lhs(), var));
    case Kind::Exp:
      return s_mul(e, derive(e.lhs(), var));
    case Kind::Sqrt:
      return s_div(derive(e.lhs(), var), s_mul(num(2.0), e));
  }
  return num(0.0);
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const double magnitude = std::signbit(v) ? -v : v;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), magnitude);
  (void)ec;
  std::string text(buf.data(), ptr);
  return std::signbit(v) ? "(-" + text + ")" : text;
}

void write(const Expression& e, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    write(e.lhs(), out);
    out += op;
    write(e.rhs(), out);
    out += ')';
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += '(';
    write(e.lhs(), out);
    out += ')';
  };
  switch (e.kind()) {
    case Kind::Number: out += format_number(e.value()); return;
    case Kind::Variable: out += e.name(); return;
    case Kind::Negate:
      out += "(-";
      write(e.lhs(), out);
      out += ')';
      return;
    case Kind::Add: binary(" + "); return;
    case Kind::Sub: binary(" - "); return;
    case Kind::Mul: binary(" * "); return;
    case Kind::Div: binary(" / "); return;
    case Kind::Pow:
      out += '(';
      write(e.lhs(), out);
      out += '^';
      out += format_number(e.value());
      out += ')';
      return;
    case Kind::Sin: call("sin"); return;
    case Kind::Cos: call("cos"); return;
    case Kind::Exp: call("exp"); return;
    case Kind::Sqrt: call("sqrt"); return;
  }
}

}  // namespace

double Expression::evaluate(const Environment& env) const {
  return eval_node(*this, [&env](std::string_view name) {
    const auto it = env.find(name);
    if (it == env.end()) throw UnboundVariable(std::string(name));
    return it->second;
  });
}

double Expression::evaluate(const std::function<double(std::string_view)>& lookup) const {
  return eval_node(*this, lookup);
}

std::set<std::string> Expression::free_variables() const {
  std::set<std::string> out;
  collect(*this, out);
  return out;
}

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

Expression differentiate(const Expression& e, std::string_view var) { return derive(e, var); }

std::string serialize(const Expression& e) {
  std::string out;
  write(e, out);
  return out;
}

}  // namespace lieint
