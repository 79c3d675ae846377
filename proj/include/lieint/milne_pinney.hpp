#pragma once

// The Milne-Pinney oscillator q' = p, p' = -omega(t)^2 q + c / q^3 on q > 0,
// written as a Lie-Hamiltonian system over sp(1,R).

#include "lieint/hamiltonian.hpp"

#include <numbers>

namespace lieint {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct MPParams {
  double c = 1.0;
  Expression omega = Expression::number(1.0);  // in t, 2*pi-periodic
  /// Extra names usable inside omega (e.g. omega0, eps).
  Environment parameters;
  std::uint64_t seed = 1;  // closure sample seed
  int closure_samples = 50;
};

/// omega given as text; the expression is parsed and checked for periodicity.
MPParams mp_params(double c, std::string_view omega, Environment parameters = {});

/// (alpha, beta) = (1 - omega^2, 1 + omega^2) at t.
std::pair<double, double> mp_alpha_beta(const MPParams& params, double t);

LieAlgebra mp_algebra();
HamiltonianBasis mp_basis(const MPParams& params);
/// b(t) = (0, -alpha(t), -beta(t)).
CoefficientCurve mp_curve(const MPParams& params);

/// Validates c > 0 and omega(2 pi) = omega(0), then assembles the system and
/// records its closure residual over samples in q in [0.5, 3], p in [-2, 2].
LieHamiltonianSystem mp_system(const MPParams& params);

/// xi1^2 + xi2^2 - xi3^2.
double casimir(const AlgebraVector& xi);

/// ||G xi' - mu x xi||_inf with xi' the Euler right-hand side,
/// G = diag(1, 1, -1) and mu = (0, alpha, beta).
double cross_product_residual(const MPParams& params, const AlgebraVector& xi, double t);

/// Full pipeline on mp_system(params). Throws NoGeneratorFound.
PeriodicIntegral mp_periodic_integral(const MPParams& params, int steps_per_period);

}  // namespace lieint
