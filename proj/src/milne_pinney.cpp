#include "lieint/milne_pinney.hpp"

#include <cmath>

namespace lieint {

namespace {

Environment omega_environment(const MPParams& params) {
  Environment env = params.parameters;
  env["c"] = params.c;
  return env;
}

double omega_at(const MPParams& params, double t) {
  Environment env = omega_environment(params);
  env["t"] = t;
  return params.omega.evaluate(env);
}

void check_params(const MPParams& params) {
  if (!(params.c > 0.0) || !std::isfinite(params.c)) throw ValidationError("Milne-Pinney needs c > 0");
  if (params.parameters.count("t") != 0) throw ValidationError("'t' cannot be a parameter");
  if (params.parameters.count("q") != 0 || params.parameters.count("p") != 0) {
    throw ValidationError("parameters cannot be named 'q' or 'p'");
  }
  const double drift = std::abs(omega_at(params, kTwoPi) - omega_at(params, 0.0));
  if (drift > 1e-9) {
    throw ValidationError("omega(t) is not 2*pi-periodic: |omega(2 pi) - omega(0)| = " + std::to_string(drift));
  }
}

}  // namespace

MPParams mp_params(double c, std::string_view omega, Environment parameters) {
  MPParams params;
  params.c = c;
  params.omega = parse(omega);
  params.parameters = std::move(parameters);
  check_params(params);
  return params;
}

std::pair<double, double> mp_alpha_beta(const MPParams& params, double t) {
  const double w = omega_at(params, t);
  return {1.0 - w * w, 1.0 + w * w};
}

LieAlgebra mp_algebra() { return preset_algebra("sp1R"); }

HamiltonianBasis mp_basis(const MPParams& params) {
  std::vector<Expression> hs = {
      parse("p*q/2"),
      parse("-p^2/4 + (q^2 - c/q^2)/4"),
      parse("-p^2/4 - (q^2 + c/q^2)/4"),
  };
  CoordinateBound positive_q;
  positive_q.coordinate = 0;
  positive_q.lower = 0.0;
  return HamiltonianBasis(PhaseSpace::single({positive_q}), std::move(hs), omega_environment(params));
}

CoefficientCurve mp_curve(const MPParams& params) {
  const Expression w2 = params.omega * params.omega;
  const Expression one = Expression::number(1.0);
  std::vector<Expression> b = {Expression::number(0.0), -(one - w2), -(w2 + one)};
  return CoefficientCurve(std::move(b), kTwoPi, true, omega_environment(params));
}

LieHamiltonianSystem mp_system(const MPParams& params) {
  check_params(params);
  HamiltonianBasis basis = mp_basis(params);
  const auto samples = sample_points(default_sample_box(basis.space()), params.closure_samples, params.seed);
  return LieHamiltonianSystem(mp_algebra(), std::move(basis), mp_curve(params), samples);
}

double casimir(const AlgebraVector& xi) {
  if (xi.size() != 3) throw DimensionMismatch("Casimir argument", 3, static_cast<std::size_t>(xi.size()));
  return xi(0) * xi(0) + xi(1) * xi(1) - xi(2) * xi(2);
}

double cross_product_residual(const MPParams& params, const AlgebraVector& xi, double t) {
  if (xi.size() != 3) throw DimensionMismatch("cross-product argument", 3, static_cast<std::size_t>(xi.size()));
  const auto [alpha, beta] = mp_alpha_beta(params, t);
  const LieAlgebra algebra = mp_algebra();
  const AlgebraVector phi = Eigen::Vector3d(0.0, -alpha, -beta);
  const AlgebraVector rhs = -algebra.bracket(phi, xi);
  const Eigen::Vector3d g_rhs(rhs(0), rhs(1), -rhs(2));
  const Eigen::Vector3d mu(0.0, alpha, beta);
  const Eigen::Vector3d x(xi(0), xi(1), xi(2));
  return (g_rhs - mu.cross(x)).cwiseAbs().maxCoeff();
}

PeriodicIntegral mp_periodic_integral(const MPParams& params, int steps_per_period) {
  return find_periodic_integral(mp_system(params), steps_per_period);
}

}  // namespace lieint
