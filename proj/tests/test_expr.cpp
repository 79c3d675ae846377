#include "lieint/errors.hpp"
#include "lieint/expr.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lieint;

namespace {

double eval(std::string_view text, Environment env = {}) { return parse(text).evaluate(env); }

std::size_t syntax_column(std::string_view text) {
  try {
    (void)parse(text);
  } catch (const SyntaxError& e) {
    return e.column;
  }
  return 0;
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("1 + 2*3") == 7);
  CHECK(eval("(1 + 2)*3") == 9);
  CHECK(eval("2^3^2") == 512);
  CHECK(eval("-2^2") == -4);
  CHECK(eval("8/4/2") == 1);
  CHECK(eval("1 - 2 - 3") == -4);
  CHECK(eval("2^-1") == 0.5);
  CHECK(eval("--3") == 3);
  CHECK(eval("+3") == 3);
  CHECK(eval("1.5e1 + .5") == 15.5);
  CHECK(eval("x^2", {{"x", 3.0}}) == 9);
  CHECK(eval("sqrt(16) + exp(0) + cos(0) + sin(0)") == 6);
}

TEST_CASE("syntax errors carry 1-based columns") {
  CHECK(syntax_column("2*") == 3);
  CHECK(syntax_column("(1 + 2") == 7);
  CHECK(syntax_column("1 + ) ") == 5);
  CHECK(syntax_column("tan(x)") == 1);
  CHECK(syntax_column("x^y") == 3);
  CHECK(syntax_column("1 2") == 3);
  CHECK(syntax_column("") == 1);
  CHECK(syntax_column("3 $ 4") == 3);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(eval("x + 1"), UnboundVariable);
  CHECK_THROWS_AS(eval("1/(x - x)", {{"x", 2.0}}), DomainError);
  CHECK_THROWS_AS(eval("sqrt(-1)"), DomainError);
  CHECK_THROWS_AS(eval("x^0.5", {{"x", -1.0}}), DomainError);
}

TEST_CASE("free variables") {
  const auto vars = parse("a*sin(t) + b^2 - a").free_variables();
  CHECK(vars == std::set<std::string>{"a", "b", "t"});
  CHECK(parse("sin(1) + 2").free_variables().empty());
}

TEST_CASE("derivative rules") {
  const Environment env{{"x", 0.7}, {"y", -1.3}};
  CHECK(differentiate(parse("x^3"), "x").evaluate(env) == doctest::Approx(3 * 0.49));
  CHECK(differentiate(parse("x*y"), "y").evaluate(env) == 0.7);
  CHECK(differentiate(parse("y"), "x").is_number(0.0));
  CHECK(differentiate(parse("x"), "x").is_number(1.0));
  CHECK(differentiate(parse("sqrt(x)"), "x").evaluate(env) == doctest::Approx(0.5 / std::sqrt(0.7)));
  CHECK(differentiate(parse("1/x"), "x").evaluate(env) == doctest::Approx(-1.0 / 0.49));
}

TEST_CASE("symbolic derivatives agree with finite differences") {
  const std::vector<std::string> cases = {
      "p*q/2",
      "-p^2/4 + (q^2 - c/q^2)/4",
      "-p^2/4 - (q^2 + c/q^2)/4",
      "sin(q*p) + cos(q)^2 - exp(-p^2/2)",
      "sqrt(q + p^2) / (1 + q^3)",
      "q^-2.5 * p",
      "-(1 - (1 + 0.1*cos(t))^2)",
  };
  std::mt19937_64 rng(5);
  for (const auto& text : cases) {
    CAPTURE(text);
    const Expression e = parse(text);
    for (const char* var : {"q", "p", "t"}) {
      const Expression d = differentiate(e, var);
      for (int s = 0; s < 20; ++s) {
        Environment env{{"q", oracle::uniform(rng, 0.5, 3.0)}, {"p", oracle::uniform(rng, -2.0, 2.0)},
                        {"t", oracle::uniform(rng, 0.0, 6.3)}, {"c", 1.0}};
        const double fd = oracle::derivative(
            [&](double v) {
              Environment shifted = env;
              shifted[var] = v;
              return e.evaluate(shifted);
            },
            env[var]);
        CHECK(std::abs(d.evaluate(env) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("serialize round-trips value-identically") {
  const std::vector<std::string> cases = {
      "p*q/2", "-p^2/4 + (q^2 - c/q^2)/4", "1e-300*q + 0.1", "-(-q)", "q^-2.5", "2^3^2 - -0.0*q",
      "sin(cos(exp(sqrt(q))))", "0.30000000000000004 * q - 1/3",
  };
  std::mt19937_64 rng(9);
  for (const auto& text : cases) {
    CAPTURE(text);
    const Expression e = parse(text);
    const std::string s = serialize(e);
    const Expression back = parse(s);
    CHECK(serialize(back) == s);
    for (int k = 0; k < 10; ++k) {
      const Environment env{{"q", oracle::uniform(rng, 0.5, 3.0)}, {"p", oracle::uniform(rng, -2, 2)}, {"c", 1.3}};
      const double a = e.evaluate(env), b = back.evaluate(env);
      CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
  }
}

TEST_CASE("serialize keeps the sign of negative zero") {
  const Expression neg_zero = Expression::number(-0.0);
  const double v = parse(serialize(neg_zero)).evaluate(Environment{});
  CHECK(std::signbit(v));
}
