#include "lieint/floquet.hpp"
#include "lieint/milne_pinney.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lieint;

namespace {

CoefficientCurve constant_curve(std::vector<double> b, double period = kTwoPi) {
  std::vector<Expression> e;
  for (double v : b) e.push_back(Expression::number(v));
  return CoefficientCurve(std::move(e), period);
}

CoefficientCurve parsed_curve(std::vector<std::string> b, double period = kTwoPi, Environment params = {}) {
  std::vector<Expression> e;
  for (const auto& s : b) e.push_back(parse(s));
  return CoefficientCurve(std::move(e), period, true, std::move(params));
}

}  // namespace

TEST_CASE("coefficient curves validate their inputs") {
  CHECK_THROWS_AS(constant_curve({1.0}, 0.0), ValidationError);
  CHECK_THROWS_AS(parsed_curve({"t"}), ValidationError);                  // not periodic
  CHECK_THROWS_AS(parsed_curve({"a*cos(t)"}), UnboundVariable);
  CHECK_THROWS_AS(parsed_curve({"cos(t)"}, kTwoPi, {{"t", 1.0}}), ValidationError);
  CHECK_NOTHROW(CoefficientCurve({parse("t")}, 1.0, false));
  const CoefficientCurve c = parsed_curve({"a*cos(t)", "sin(t)"}, kTwoPi, {{"a", 2.0}});
  CHECK(c.value(0, 0.0) == 2.0);
  CHECK(c.values(kTwoPi / 4)(1) == 1.0);
}

TEST_CASE("Euler flow preserves the Killing norm") {
  const LieAlgebra g = preset_algebra("so3");
  const CoefficientCurve curve = parsed_curve({"cos(t)", "0.5*sin(2*t)", "1 + 0.3*cos(t)"});
  const AlgebraVector xi0 = Eigen::Vector3d(0.3, -1.0, 0.7);
  const auto nodes = integrate_euler(g, curve, xi0, kTwoPi, 2000);
  REQUIRE(nodes.size() == 2001);
  CHECK(nodes.back().t == kTwoPi);
  for (const auto& n : nodes) CHECK(std::abs(g.killing(n.value, n.value) - g.killing(xi0, xi0)) <= 1e-10);
  CHECK_THROWS_AS(integrate_euler(g, curve, Eigen::Vector2d(1, 0), 1.0, 10), DimensionMismatch);
}

TEST_CASE("constant coefficients reproduce the matrix exponential") {
  const LieAlgebra g = preset_algebra("sp1R");
  const AlgebraVector b = Eigen::Vector3d(0.2, -0.4, -1.1);
  const FundamentalSolution F = fundamental_solution(g, constant_curve({0.2, -0.4, -1.1}), 1000);
  const Eigen::MatrixXd A = -g.ad(b);
  for (std::size_t k = 0; k < F.grid().size(); k += 125) {
    CHECK(oracle::inf_norm(F.operators()[k] - oracle::expm(F.grid()[k] * A)) <= 1e-9);
  }
}

TEST_CASE("evaluate_F extends across periods and between nodes") {
  const LieAlgebra g = preset_algebra("sp1R");
  const MPParams mp = mp_params(1.0, "1 + 0.1*cos(t)");
  const FundamentalSolution F = fundamental_solution(g, mp_curve(mp), 4000);
  const Eigen::MatrixXd& M = F.monodromy();
  CHECK(F.grid().back() == F.period());
  CHECK(oracle::inf_norm(evaluate_F(F, 0.0) - Eigen::MatrixXd::Identity(3, 3)) == 0.0);
  std::mt19937_64 rng(4);
  for (int s = 0; s < 10; ++s) {
    const double t = oracle::uniform(rng, 0.0, kTwoPi);
    CHECK(oracle::inf_norm(evaluate_F(F, t + kTwoPi) - evaluate_F(F, t) * M) <= 1e-10);
    CHECK(oracle::inf_norm(evaluate_F(F, t + 2 * kTwoPi) - evaluate_F(F, t) * M * M) <= 1e-9);
    // Compare the interpolated value with a direct integration to t.
    const AlgebraVector x = oracle::random_vector(rng, 3);
    const auto direct = integrate_euler(g, mp_curve(mp), x, t, 4000);
    CHECK(oracle::inf_norm(evaluate_F(F, t) * x - direct.back().value) <= 1e-9);
  }
  CHECK_THROWS_AS(fundamental_solution(g, mp_curve(mp), 8), ValidationError);
  CHECK_THROWS_AS(evaluate_F(F, -1.0), ValidationError);
}

TEST_CASE("classification tags") {
  const LieAlgebra g = preset_algebra("so3");
  SUBCASE("rotation about e3") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
    const double c = std::cos(1.2), s = std::sin(1.2);
    M.topLeftCorner(2, 2) << c, -s, s, c;
    const FloquetClassification cl = floquet_classify(g, M);
    int elliptic = 0, fixed = 0;
    for (const auto& e : cl.eigenpairs) {
      elliptic += e.tag == FloquetTag::Elliptic;
      fixed += e.tag == FloquetTag::Fixed;
      CHECK(e.residual <= 1e-14);
    }
    CHECK(elliptic == 2);
    CHECK(fixed == 1);
    CHECK(cl.max_modulus_deviation() <= 1e-15);
  }
  SUBCASE("hyperbolic sp(1,R) monodromy") {
    const LieAlgebra sp = preset_algebra("sp1R");
    const Eigen::MatrixXd M = oracle::expm(-kTwoPi * sp.ad(Eigen::Vector3d(0.0, 0.3, 0.1)));
    const FloquetClassification cl = floquet_classify(sp, M);
    int null = 0, fixed = 0;
    for (const auto& e : cl.eigenpairs) {
      null += e.tag == FloquetTag::Null;
      fixed += e.tag == FloquetTag::Fixed;
    }
    CHECK(null == 2);
    CHECK(fixed == 1);
    CHECK(cl.max_modulus() > 1.5);
  }
  SUBCASE("off-circle multipliers on a non-Killing operator") {
    const FloquetClassification cl = floquet_classify(g, Eigen::Vector3d(2.0, 0.5, 1.0).asDiagonal().toDenseMatrix());
    CHECK(cl.tag_summary().find("off-circle") != std::string::npos);
  }
}

TEST_CASE("generator normalization and angles") {
  const AlgebraVector v = normalize_generator(Eigen::Vector3d(-1e-9, -2.0, 1.0));
  CHECK(v(1) == 1.0);
  CHECK(v(2) == -0.5);
  CHECK(sine_of_angle(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-3, 0, 0)) <= 1e-16);
  CHECK(sine_of_angle(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("anti-periodic generators of a half-turn") {
  const FloquetAnalysis a = analyze_floquet(preset_algebra("so3"), constant_curve({0, 0, 0.5}), 4000);
  std::vector<AlgebraVector> period2;
  for (const auto& g : a.search.generators) {
    if (g.period_multiple == 2) period2.push_back(g.vector);
  }
  REQUIRE(period2.size() == 2);
  Eigen::MatrixXd span(3, 2);
  span << period2[0], period2[1];
  CHECK(std::abs(span.row(2).norm()) <= 1e-8);
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXd>(span).singularValues().minCoeff() >= 0.5);
  const PeriodicGenerator* chosen = select_generator(a.search);
  REQUIRE(chosen != nullptr);
  CHECK(chosen->period_multiple == 1);
  CHECK(oracle::inf_norm(chosen->vector - Eigen::Vector3d(0, 0, 1)) <= 1e-8);
}

TEST_CASE("center vectors are generators") {
  const FloquetAnalysis a =
      analyze_floquet(preset_algebra("heisenberg3"), parsed_curve({"cos(t)", "1 + 0.5*sin(t)", "0.3"}), 2000);
  REQUIRE(a.center.size() == 1);
  bool found = false;
  for (const auto& g : a.search.generators)
    found = found || (g.provenance == Provenance::Center && oracle::inf_norm(g.vector - Eigen::Vector3d(0, 0, 1)) <= 1e-12);
  for (const auto& g : a.search.duplicates)
    found = found || (g.provenance == Provenance::Center && oracle::inf_norm(g.vector - Eigen::Vector3d(0, 0, 1)) <= 1e-12);
  CHECK(found);
}

TEST_CASE("no generator when nothing is fixed") {
  const LieAlgebra g = preset_algebra("abelian2");
  const Eigen::MatrixXd M = Eigen::Vector2d(2.0, 0.5).asDiagonal();
  const FloquetClassification cl = floquet_classify(g, M);
  const GeneratorSearch s = periodic_generators(g, M, cl, center(g));
  CHECK(s.generators.empty());
  CHECK(select_generator(s) == nullptr);
  CHECK_FALSE(s.skipped.empty());
  const NoGeneratorFound err(cl);
  CHECK(std::string(err.what()).find("null") != std::string::npos);
}

TEST_CASE("every emitted generator is periodic") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = oracle::uniform(rng, -1, 1), b = oracle::uniform(rng, -1, 1), c = oracle::uniform(rng, -1, 1);
    const CoefficientCurve curve = parsed_curve(
        {std::to_string(a) + "*cos(t)", std::to_string(b) + " + 0.2*sin(t)", std::to_string(c) + "*cos(2*t)"});
    for (const char* name : {"so3", "sp1R"}) {
      const FloquetAnalysis an = analyze_floquet(preset_algebra(name), curve, 2000);
      const Eigen::MatrixXd& M = an.fund.monodromy();
      for (const auto& gen : an.search.generators) {
        const double sign = gen.period_multiple == 1 ? 1.0 : -1.0;
        CHECK(oracle::inf_norm(M * gen.vector - sign * gen.vector) <= 1e-8);
        CHECK(oracle::inf_norm(gen.vector) == doctest::Approx(1.0));
      }
    }
  }
}
