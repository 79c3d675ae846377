#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace lieint {

/// Variable bindings for evaluation.
using Environment = std::map<std::string, double, std::less<>>;

/// Immutable arithmetic expression tree.
///
/// Grammar (whitespace is insignificant):
///
///     expr     := term (('+' | '-') term)*
///     term     := unary (('*' | '/') unary)*
///     unary    := ('-' | '+') unary | power
///     power    := primary ('^' exponent)?
///     exponent := ('-' | '+') exponent | primary ('^' exponent)?    -- must be constant
///     primary  := number | name | func '(' expr ')' | '(' expr ')'
///     func     := 'sin' | 'cos' | 'exp' | 'sqrt'
///
/// `^` binds tighter than unary minus, so `-q^2` is `-(q^2)`, and it is
/// right-associative. Exponents must fold to a real constant at parse time.
class Expression {
 public:
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt };

  /// Defaults to the literal 0.
  Expression();

  static Expression number(double value);
  static Expression variable(std::string name);

  Kind kind() const;
  /// Literal value for Number, exponent for Pow.
  double value() const;
  const std::string& name() const;
  /// Operand(s); `rhs()` is only valid for binary nodes.
  Expression lhs() const;
  Expression rhs() const;

  bool is_number() const { return kind() == Kind::Number; }
  bool is_number(double v) const { return is_number() && value() == v; }

  /// Throws UnboundVariable or DomainError.
  double evaluate(const Environment& env) const;
  /// Evaluation with a variable resolver; used on hot paths to avoid building maps.
  double evaluate(const std::function<double(std::string_view)>& lookup) const;

  std::set<std::string> free_variables() const;

  // Plain tree construction, no simplification.
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend Expression pow(const Expression& base, double exponent);
  friend Expression sin(const Expression& a);
  friend Expression cos(const Expression& a);
  friend Expression exp(const Expression& a);
  friend Expression sqrt(const Expression& a);

  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expression make(Kind kind, double value, std::string name, Expression a, Expression b);

  std::shared_ptr<const Node> node_;
};

Expression parse(std::string_view text);

/// Exact symbolic derivative, simplified only by constant folding and identity elimination.
Expression differentiate(const Expression& e, std::string_view var);

/// Canonical fully parenthesized text. Re-parsing evaluates bit-identically.
std::string serialize(const Expression& e);

}  // namespace lieint
