#pragma once

#include "lieint/algebra.hpp"
#include "lieint/expr.hpp"
#include "lieint/floquet.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lieint {

/// Canonical coordinates (q_1..q_m, p_1..p_m), stored in that order.
using PhasePoint = Eigen::VectorXd;

/// Strict bounds on one coordinate: lower < x < upper.
struct CoordinateBound {
  int coordinate = 0;  // index into q_1..q_m, p_1..p_m
  std::optional<double> lower;
  std::optional<double> upper;
};

class PhaseSpace {
 public:
  PhaseSpace(std::vector<std::string> q_names, std::vector<std::string> p_names,
             std::vector<CoordinateBound> bounds = {});

  /// One canonical pair named q, p.
  static PhaseSpace single(std::vector<CoordinateBound> bounds = {});

  int degrees() const { return static_cast<int>(q_names_.size()); }
  int dim() const { return 2 * degrees(); }
  const std::string& name(int coordinate) const;
  /// -1 when the name is not a coordinate.
  int index_of(std::string_view name) const;
  const std::vector<CoordinateBound>& bounds() const { return bounds_; }

  bool contains(const PhasePoint& x) const;
  /// Human-readable description of the first violated bound, empty if none.
  std::string violation(const PhasePoint& x) const;

  /// Default sampling interval for one coordinate: [-2, 2], or [L+0.5, L+3] /
  /// [U-3, U-0.5] next to a one-sided bound, or the inner 80% of a two-sided one.
  std::pair<double, double> sampling_interval(int coordinate) const;

 private:
  std::vector<std::string> q_names_;
  std::vector<std::string> p_names_;
  std::vector<CoordinateBound> bounds_;
};

/// Sampling box, one [lo, hi] per coordinate.
using SampleBox = std::vector<std::pair<double, double>>;

SampleBox default_sample_box(const PhaseSpace& space);

/// Uniform samples from the box, deterministic in `seed`.
std::vector<PhasePoint> sample_points(const SampleBox& box, int count, std::uint64_t seed);

/// H_1..H_n with cached symbolic gradients.
class HamiltonianBasis {
 public:
  HamiltonianBasis(PhaseSpace space, std::vector<Expression> hamiltonians, Environment parameters = {});

  int size() const { return static_cast<int>(hamiltonians_.size()); }
  const PhaseSpace& space() const { return space_; }
  const Environment& parameters() const { return parameters_; }
  const Expression& hamiltonian(int i) const { return hamiltonians_[static_cast<std::size_t>(i)]; }
  /// d H_i / d(coordinate), coordinate indexed like PhasePoint.
  const Expression& partial(int i, int coordinate) const;

  double value(int i, const PhasePoint& x) const;
  Eigen::VectorXd values(const PhasePoint& x) const;
  /// Row i is the gradient of H_i, columns ordered like PhasePoint.
  Eigen::MatrixXd gradients(const PhasePoint& x) const;

  /// Evaluate an arbitrary expression over this basis' coordinates and parameters.
  double evaluate(const Expression& e, const PhasePoint& x) const;

 private:
  PhaseSpace space_;
  std::vector<Expression> hamiltonians_;
  Environment parameters_;
  std::vector<std::vector<Expression>> partials_;
};

/// Bracket from gradients: sum_a (f_p g_q - f_q g_p).
double poisson_bracket(const Eigen::VectorXd& grad_f, const Eigen::VectorXd& grad_g, int degrees);

/// {f, g}(x) with symbolic partials taken on the fly.
double poisson_bracket(const Expression& f, const Expression& g, const PhaseSpace& space,
                       const Environment& parameters, const PhasePoint& x);

/// (dH/dp, -dH/dq) at x.
Eigen::VectorXd hamiltonian_vector_field(const Expression& H, const PhaseSpace& space, const Environment& parameters,
                                         const PhasePoint& x);

/// max over samples and (i,j) of |{H_i,H_j}(x) - sum_k lambda_ij^k H_k(x)|.
double verify_closure(const LieAlgebra& algebra, const HamiltonianBasis& basis, std::span<const PhasePoint> samples);

/// X(t,x) = sum_i b_i(t) X_{H_i}(x) together with its algebra.
class LieHamiltonianSystem {
 public:
  /// Runs verify_closure on `closure_samples` and records the residual.
  LieHamiltonianSystem(LieAlgebra algebra, HamiltonianBasis basis, CoefficientCurve curve,
                       std::span<const PhasePoint> closure_samples);

  const LieAlgebra& algebra() const { return algebra_; }
  const HamiltonianBasis& basis() const { return basis_; }
  const CoefficientCurve& curve() const { return curve_; }
  const PhaseSpace& space() const { return basis_.space(); }
  double closure_residual() const { return closure_residual_; }
  /// True when the recorded closure residual is within `tolerance`.
  bool closure_ok(double tolerance = 1e-8) const { return closure_residual_ <= tolerance; }

  Eigen::VectorXd vector_field(double t, const PhasePoint& x) const;

 private:
  LieAlgebra algebra_;
  HamiltonianBasis basis_;
  CoefficientCurve curve_;
  double closure_residual_ = 0.0;
};

double verify_closure(const LieHamiltonianSystem& system, std::span<const PhasePoint> samples);

struct PhaseTrajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
};

/// RK4 on the system's vector field. Throws DomainExit as soon as a stage or a
/// step lands outside the phase-space bounds.
PhaseTrajectory integrate_flow(const LieHamiltonianSystem& system, const PhasePoint& x0, double t_end, int steps);

/// I(t, x) = sum_j xi_j(t) H_j(x) with xi(t) = F(t) alpha.
class FirstIntegral {
 public:
  FirstIntegral(FundamentalSolution fund, HamiltonianBasis basis, AlgebraVector alpha,
                std::optional<int> period_multiple = std::nullopt);

  const AlgebraVector& alpha() const { return alpha_; }
  bool trivial() const { return trivial_; }
  std::optional<int> period_multiple() const { return period_multiple_; }
  const FundamentalSolution& fundamental() const { return fund_; }
  const HamiltonianBasis& basis() const { return basis_; }
  /// xi on the fundamental solution's grid over one period.
  const std::vector<TimedVector>& xi_curve() const { return xi_curve_; }

  /// xi(t) for any t >= 0.
  AlgebraVector xi(double t) const;
  double value(double t, const PhasePoint& x) const;
  Eigen::VectorXd gradient(double t, const PhasePoint& x) const;

  /// Max deviation between stored xi nodes and a fresh RK4 step from the
  /// previous node, over 5 nodes picked with `seed`.
  double euler_residual(std::uint64_t seed = 7) const;

 private:
  FundamentalSolution fund_;
  HamiltonianBasis basis_;
  AlgebraVector alpha_;
  std::optional<int> period_multiple_;
  bool trivial_ = false;
  std::vector<TimedVector> xi_curve_;
};

FirstIntegral first_integral(const FundamentalSolution& fund, const HamiltonianBasis& basis,
                             const AlgebraVector& alpha);

struct ConservationReport {
  double initial_value = 0.0;
  double max_abs_drift = 0.0;
  double relative_drift = 0.0;  // max_abs_drift / max(1, |I(0)|)
  std::size_t samples = 0;
};

ConservationReport conservation_report(const FirstIntegral& integral, const PhaseTrajectory& trajectory);
ConservationReport conservation_report(const std::function<double(double, const PhasePoint&)>& integral,
                                       const PhaseTrajectory& trajectory);

struct TimedPoint {
  double t;
  PhasePoint x;
};

/// max |{I_alpha(t,.), I_beta(t,.)}(x) - I_[alpha,beta](t,x)| with the bracket
/// taken in x at frozen t.
double poisson_isomorphism_check(const FundamentalSolution& fund, const HamiltonianBasis& basis,
                                 const AlgebraVector& alpha, const AlgebraVector& beta,
                                 std::span<const TimedPoint> samples);

/// Full pipeline: Floquet analysis, generator selection, and the first integral
/// of the selected generator. Throws NoGeneratorFound.
struct PeriodicIntegral {
  FirstIntegral integral;
  FloquetAnalysis analysis;
  PeriodicGenerator generator;
};

PeriodicIntegral find_periodic_integral(const LieHamiltonianSystem& system, int steps_per_period);

}  // namespace lieint
