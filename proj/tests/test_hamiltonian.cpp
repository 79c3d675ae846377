#include "lieint/config.hpp"
#include "lieint/hamiltonian.hpp"
#include "lieint/milne_pinney.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace lieint;

namespace {

CoordinateBound lower_bound(int coordinate, double value) {
  CoordinateBound b;
  b.coordinate = coordinate;
  b.lower = value;
  return b;
}

}  // namespace

TEST_CASE("phase space naming and bounds") {
  const PhaseSpace s({"x", "y"}, {"px", "py"}, {lower_bound(1, 0.0)});
  CHECK(s.degrees() == 2);
  CHECK(s.dim() == 4);
  CHECK(s.name(2) == "px");
  CHECK(s.index_of("py") == 3);
  CHECK(s.index_of("z") == -1);
  CHECK(s.contains(Eigen::Vector4d(-5, 0.1, 0, 0)));
  CHECK_FALSE(s.contains(Eigen::Vector4d(-5, 0.0, 0, 0)));
  CHECK(s.violation(Eigen::Vector4d(0, -1, 0, 0)).find("y") != std::string::npos);
  CHECK(s.sampling_interval(0) == std::pair(-2.0, 2.0));
  CHECK(s.sampling_interval(1) == std::pair(0.5, 3.0));

  CoordinateBound both;
  both.coordinate = 0;
  both.lower = 0.0;
  both.upper = 10.0;
  CHECK(PhaseSpace({"x"}, {"p"}, {both}).sampling_interval(0) == std::pair(1.0, 9.0));

  CHECK_THROWS_AS(PhaseSpace({"x"}, {"x"}), ValidationError);
  CHECK_THROWS_AS(PhaseSpace({"x"}, {"p", "r"}), DimensionMismatch);
  CHECK_THROWS_AS(PhaseSpace({"t"}, {"p"}), ValidationError);
}

TEST_CASE("samples are deterministic and inside the box") {
  const SampleBox box = {{0.5, 3.0}, {-2.0, 2.0}};
  const auto a = sample_points(box, 100, 42), b = sample_points(box, 100, 42), c = sample_points(box, 100, 43);
  CHECK(a.size() == 100);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    differs = differs || a[i] != c[i];
    CHECK(a[i](0) >= 0.5);
    CHECK(a[i](0) <= 3.0);
    CHECK(std::abs(a[i](1)) <= 2.0);
  }
  CHECK(differs);
}

TEST_CASE("bracket and vector-field conventions") {
  const PhaseSpace s = PhaseSpace::single();
  const Eigen::Vector2d x(0.7, -1.1);
  // {f,g} = f_p g_q - f_q g_p
  CHECK(poisson_bracket(parse("q"), parse("p"), s, {}, x) == -1.0);
  CHECK(poisson_bracket(parse("p"), parse("q"), s, {}, x) == 1.0);
  CHECK(poisson_bracket(parse("q^2"), parse("q*p"), s, {}, x) == doctest::Approx(-2 * 0.7 * 0.7));
  // X_H = (dH/dp, -dH/dq)
  const Eigen::VectorXd v = hamiltonian_vector_field(parse("p^2/2 + q^2/2"), s, {}, x);
  CHECK(v(0) == -1.1);
  CHECK(v(1) == -0.7);
}

TEST_CASE("Poisson bracket is antisymmetric and satisfies Jacobi on samples") {
  const PhaseSpace s({"q1", "q2"}, {"p1", "p2"});
  const Expression f = parse("q1*p2 + sin(q2)"), g = parse("p1^2 - q1*q2"), h = parse("exp(p2/3)*q1");
  const HamiltonianBasis basis(s, {f, g, h, parse("q1*p2 + sin(q2)") * parse("p1^2 - q1*q2")});
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd x = oracle::random_vector(rng, 4);
    const Eigen::MatrixXd G = basis.gradients(x);
    const auto pb = [&](int i, int j) { return poisson_bracket(Eigen::VectorXd(G.row(i)), Eigen::VectorXd(G.row(j)), 2); };
    CHECK(pb(0, 1) == -pb(1, 0));
    // Leibniz: {fg, h} = f{g,h} + g{f,h}
    const double lhs = pb(3, 2);
    const double rhs = basis.value(0, x) * pb(1, 2) + basis.value(1, x) * pb(0, 2);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("basis construction rejects unbound names and shadowing") {
  const PhaseSpace s = PhaseSpace::single();
  CHECK_THROWS_AS(HamiltonianBasis(s, {parse("q*k")}), UnboundVariable);
  CHECK_THROWS_AS(HamiltonianBasis(s, {parse("q")}, {{"q", 1.0}}), ValidationError);
  CHECK_THROWS_AS(HamiltonianBasis(s, {}), ValidationError);
  CHECK_NOTHROW(HamiltonianBasis(s, {parse("q*k")}, {{"k", 2.0}}));
}

TEST_CASE("closure residual flags a basis that does not realize the algebra") {
  const PhaseSpace s = PhaseSpace::single();
  const HamiltonianBasis wrong(s, {parse("q"), parse("p"), parse("q*p")});
  const auto samples = sample_points(default_sample_box(s), 20, 1);
  CHECK(verify_closure(preset_algebra("heisenberg3"), wrong, samples) > 0.1);
  const HamiltonianBasis right(s, {parse("p"), parse("q"), Expression::number(1.0)});
  CHECK(verify_closure(preset_algebra("heisenberg3"), right, samples) == 0.0);
  CHECK_THROWS_AS(verify_closure(preset_algebra("so3"), HamiltonianBasis(s, {parse("q")}), samples), DimensionMismatch);
}

TEST_CASE("flow leaves the domain with a DomainExit") {
  CoordinateBound b = lower_bound(0, 0.0);
  const PhaseSpace s({"q"}, {"p"}, {b});
  const HamiltonianBasis basis(s, {parse("-p")});
  const CoefficientCurve curve({Expression::number(1.0)}, 1.0);
  const LieHamiltonianSystem sys(preset_algebra("abelian1"), basis, curve, sample_points(default_sample_box(s), 5, 1));
  CHECK_NOTHROW(integrate_flow(sys, Eigen::Vector2d(0.5, 0.0), 0.4, 40));
  try {
    (void)integrate_flow(sys, Eigen::Vector2d(0.5, 0.0), 1.0, 100);
    FAIL("expected DomainExit");
  } catch (const DomainExit& e) {
    CHECK(std::string(e.what()).find("q") != std::string::npos);
  }
  CHECK_THROWS_AS(integrate_flow(sys, Eigen::Vector2d(-0.5, 0.0), 1.0, 10), DomainExit);
}

TEST_CASE("RK4 flow of a harmonic oscillator matches the closed form") {
  const PhaseSpace s = PhaseSpace::single();
  const HamiltonianBasis basis(s, {parse("(p^2 + q^2)/2")});
  const CoefficientCurve curve({Expression::number(1.0)}, kTwoPi);
  const LieHamiltonianSystem sys(preset_algebra("abelian1"), basis, curve, sample_points(default_sample_box(s), 5, 1));
  const PhaseTrajectory tr = integrate_flow(sys, Eigen::Vector2d(1.0, 0.0), 2.0, 2000);
  // q' = p, p' = -q: q = cos t, p = -sin t
  CHECK(std::abs(tr.points.back()(0) - std::cos(2.0)) <= 1e-12);
  CHECK(std::abs(tr.points.back()(1) + std::sin(2.0)) <= 1e-12);
  CHECK(tr.times.back() == 2.0);
}

TEST_CASE("first integrals are conserved for any initial algebra vector") {
  const MPParams mp = mp_params(1.0, "1 + 0.1*cos(t)");
  const LieHamiltonianSystem sys = mp_system(mp);
  const FundamentalSolution F = fundamental_solution(sys.algebra(), sys.curve(), 4000);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const FirstIntegral I(F, sys.basis(), oracle::random_vector(rng, 3));
    CHECK_FALSE(I.trivial());
    CHECK(I.euler_residual() <= 1e-12);
    CHECK(I.xi_curve().size() == 4001);
    const PhaseTrajectory tr = integrate_flow(sys, Eigen::Vector2d(1.5, 0.3), kTwoPi, 4000);
    CHECK(conservation_report(I, tr).relative_drift <= 1e-8);
    // gradient agrees with finite differences in x
    const Eigen::Vector2d x(1.2, -0.4);
    const Eigen::VectorXd g = I.gradient(0.9, x);
    for (int c = 0; c < 2; ++c) {
      const double fd = oracle::derivative(
          [&](double v) {
            Eigen::Vector2d y = x;
            y(c) = v;
            return I.value(0.9, y);
          },
          x(c));
      CHECK(std::abs(g(c) - fd) <= 1e-8);
    }
  }
  CHECK(FirstIntegral(F, sys.basis(), Eigen::Vector3d::Zero()).trivial());
  CHECK_THROWS_AS(FirstIntegral(F, sys.basis(), Eigen::Vector2d(1, 0)), DimensionMismatch);
}

TEST_CASE("conservation report arithmetic") {
  PhaseTrajectory tr;
  tr.times = {0.0, 1.0, 2.0};
  tr.points = {Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)};
  const ConservationReport r = conservation_report([](double t, const PhasePoint&) { return 4.0 + 0.5 * t * t; }, tr);
  CHECK(r.initial_value == 4.0);
  CHECK(r.max_abs_drift == 2.0);
  CHECK(r.relative_drift == 0.5);
  CHECK(r.samples == 3);
}

TEST_CASE("generic systems via the heisenberg_center preset") {
  const RunConfig cfg = heisenberg_center_config();
  const LieHamiltonianSystem sys = build_system(cfg);
  CHECK(sys.closure_residual() == 0.0);
  const FundamentalSolution F = fundamental_solution(sys.algebra(), sys.curve(), 1000);
  const FirstIntegral I(F, sys.basis(), Eigen::Vector3d(0, 0, 1));
  for (const auto& node : I.xi_curve()) CHECK(node.value == Eigen::VectorXd(Eigen::Vector3d(0, 0, 1)));
}
