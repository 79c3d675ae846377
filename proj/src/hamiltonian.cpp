#include "lieint/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace lieint {

PhaseSpace::PhaseSpace(std::vector<std::string> q_names, std::vector<std::string> p_names,
                       std::vector<CoordinateBound> bounds)
    : q_names_(std::move(q_names)), p_names_(std::move(p_names)), bounds_(std::move(bounds)) {
  if (q_names_.empty()) throw ValidationError("phase space needs at least one canonical pair");
  if (q_names_.size() != p_names_.size()) {
    throw DimensionMismatch("momentum names", q_names_.size(), p_names_.size());
  }
  std::set<std::string> seen;
  for (int i = 0; i < dim(); ++i) {
    const std::string& n = name(i);
    if (n.empty() || n == "t") throw ValidationError("invalid coordinate name '" + n + "'");
    if (!seen.insert(n).second) throw ValidationError("duplicate coordinate name '" + n + "'");
  }
  for (const auto& b : bounds_) {
    if (b.coordinate < 0 || b.coordinate >= dim()) throw ValidationError("bound on unknown coordinate");
    if (b.lower && b.upper && !(*b.lower < *b.upper)) {
      throw ValidationError("inconsistent bounds on '" + name(b.coordinate) + "'");
    }
  }
}

PhaseSpace PhaseSpace::single(std::vector<CoordinateBound> bounds) { return PhaseSpace({"q"}, {"p"}, std::move(bounds)); }

const std::string& PhaseSpace::name(int coordinate) const {
  const auto m = static_cast<std::size_t>(degrees());
  const auto c = static_cast<std::size_t>(coordinate);
  return c < m ? q_names_[c] : p_names_[c - m];
}

int PhaseSpace::index_of(std::string_view n) const {
  for (int i = 0; i < dim(); ++i)
    if (name(i) == n) return i;
  return -1;
}

std::string PhaseSpace::violation(const PhasePoint& x) const {
  if (x.size() != dim()) return "wrong dimension";
  for (const auto& b : bounds_) {
    const double v = x(b.coordinate);
    if (!std::isfinite(v) || (b.lower && !(v > *b.lower)) || (b.upper && !(v < *b.upper))) {
      std::ostringstream os;
      os << "(" << name(b.coordinate) << " = " << v << ")";
      return os.str();
    }
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i))) return "(" + name(static_cast<int>(i)) + " is not finite)";
  }
  return {};
}

bool PhaseSpace::contains(const PhasePoint& x) const { return violation(x).empty(); }

std::pair<double, double> PhaseSpace::sampling_interval(int coordinate) const {
  std::optional<double> lo, hi;
  for (const auto& b : bounds_) {
    if (b.coordinate != coordinate) continue;
    if (b.lower) lo = lo ? std::max(*lo, *b.lower) : *b.lower;
    if (b.upper) hi = hi ? std::min(*hi, *b.upper) : *b.upper;
  }
  if (lo && hi) {
    const double w = *hi - *lo;
    return {*lo + 0.1 * w, *hi - 0.1 * w};
  }
  if (lo) return {*lo + 0.5, *lo + 3.0};
  if (hi) return {*hi - 3.0, *hi - 0.5};
  return {-2.0, 2.0};
}

SampleBox default_sample_box(const PhaseSpace& space) {
  SampleBox box;
  for (int i = 0; i < space.dim(); ++i) box.push_back(space.sampling_interval(i));
  return box;
}

std::vector<PhasePoint> sample_points(const SampleBox& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int s = 0; s < count; ++s) {
    PhasePoint x(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      std::uniform_real_distribution<double> u(box[i].first, box[i].second);
      x(static_cast<Eigen::Index>(i)) = u(rng);
    }
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------

HamiltonianBasis::HamiltonianBasis(PhaseSpace space, std::vector<Expression> hamiltonians, Environment parameters)
    : space_(std::move(space)), hamiltonians_(std::move(hamiltonians)), parameters_(std::move(parameters)) {
  if (hamiltonians_.empty()) throw ValidationError("Hamiltonian basis is empty");
  for (const auto& [name, value] : parameters_) {
    if (space_.index_of(name) >= 0) throw ValidationError("parameter '" + name + "' shadows a coordinate");
    (void)value;
  }
  for (const auto& h : hamiltonians_) {
    for (const auto& name : h.free_variables()) {
      if (space_.index_of(name) < 0 && parameters_.find(name) == parameters_.end()) throw UnboundVariable(name);
    }
  }
  partials_.resize(hamiltonians_.size());
  for (std::size_t i = 0; i < hamiltonians_.size(); ++i) {
    for (int c = 0; c < space_.dim(); ++c) partials_[i].push_back(differentiate(hamiltonians_[i], space_.name(c)));
  }
}

const Expression& HamiltonianBasis::partial(int i, int coordinate) const {
  return partials_[static_cast<std::size_t>(i)][static_cast<std::size_t>(coordinate)];
}

double HamiltonianBasis::evaluate(const Expression& e, const PhasePoint& x) const {
  return e.evaluate([&](std::string_view name) -> double {
    const int idx = space_.index_of(name);
    if (idx >= 0) return x(idx);
    const auto it = parameters_.find(name);
    if (it == parameters_.end()) throw UnboundVariable(std::string(name));
    return it->second;
  });
}

double HamiltonianBasis::value(int i, const PhasePoint& x) const { return evaluate(hamiltonian(i), x); }

Eigen::VectorXd HamiltonianBasis::values(const PhasePoint& x) const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out(i) = value(i, x);
  return out;
}

Eigen::MatrixXd HamiltonianBasis::gradients(const PhasePoint& x) const {
  Eigen::MatrixXd out(size(), space_.dim());
  for (int i = 0; i < size(); ++i)
    for (int c = 0; c < space_.dim(); ++c) out(i, c) = evaluate(partial(i, c), x);
  return out;
}

double poisson_bracket(const Eigen::VectorXd& grad_f, const Eigen::VectorXd& grad_g, int m) {
  double s = 0.0;
  for (int a = 0; a < m; ++a) s += grad_f(m + a) * grad_g(a) - grad_f(a) * grad_g(m + a);
  return s;
}

namespace {

Eigen::VectorXd expression_gradient(const Expression& f, const PhaseSpace& space, const Environment& parameters,
                                    const PhasePoint& x) {
  auto lookup = [&](std::string_view name) -> double {
    const int idx = space.index_of(name);
    if (idx >= 0) return x(idx);
    const auto it = parameters.find(name);
    if (it == parameters.end()) throw UnboundVariable(std::string(name));
    return it->second;
  };
  Eigen::VectorXd g(space.dim());
  for (int c = 0; c < space.dim(); ++c) g(c) = differentiate(f, space.name(c)).evaluate(lookup);
  return g;
}

}  // namespace

double poisson_bracket(const Expression& f, const Expression& g, const PhaseSpace& space,
                       const Environment& parameters, const PhasePoint& x) {
  return poisson_bracket(expression_gradient(f, space, parameters, x), expression_gradient(g, space, parameters, x),
                         space.degrees());
}

Eigen::VectorXd hamiltonian_vector_field(const Expression& H, const PhaseSpace& space, const Environment& parameters,
                                         const PhasePoint& x) {
  const Eigen::VectorXd g = expression_gradient(H, space, parameters, x);
  const int m = space.degrees();
  Eigen::VectorXd v(space.dim());
  v.head(m) = g.tail(m);
  v.tail(m) = -g.head(m);
  return v;
}

double verify_closure(const LieAlgebra& algebra, const HamiltonianBasis& basis, std::span<const PhasePoint> samples) {
  const int n = algebra.dim();
  if (basis.size() != n) {
    throw DimensionMismatch("Hamiltonian basis", static_cast<std::size_t>(n), static_cast<std::size_t>(basis.size()));
  }
  const int m = basis.space().degrees();
  double worst = 0.0;
  for (const PhasePoint& x : samples) {
    const Eigen::MatrixXd grads = basis.gradients(x);
    const Eigen::VectorXd h = basis.values(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double expected = 0.0;
        for (int k = 0; k < n; ++k) expected += algebra.constant(i, j, k) * h(k);
        const double got = poisson_bracket(Eigen::VectorXd(grads.row(i)), Eigen::VectorXd(grads.row(j)), m);
        worst = std::max(worst, std::abs(got - expected));
      }
  }
  return worst;
}

// ---------------------------------------------------------------------------

LieHamiltonianSystem::LieHamiltonianSystem(LieAlgebra algebra, HamiltonianBasis basis, CoefficientCurve curve,
                                           std::span<const PhasePoint> closure_samples)
    : algebra_(std::move(algebra)), basis_(std::move(basis)), curve_(std::move(curve)) {
  const auto n = static_cast<std::size_t>(algebra_.dim());
  if (static_cast<std::size_t>(basis_.size()) != n) {
    throw DimensionMismatch("Hamiltonian basis", n, static_cast<std::size_t>(basis_.size()));
  }
  if (static_cast<std::size_t>(curve_.size()) != n) {
    throw DimensionMismatch("coefficient curve", n, static_cast<std::size_t>(curve_.size()));
  }
  closure_residual_ = verify_closure(algebra_, basis_, closure_samples);
}

double verify_closure(const LieHamiltonianSystem& system, std::span<const PhasePoint> samples) {
  return verify_closure(system.algebra(), system.basis(), samples);
}

Eigen::VectorXd LieHamiltonianSystem::vector_field(double t, const PhasePoint& x) const {
  const Eigen::VectorXd b = curve_.values(t);
  const Eigen::MatrixXd grads = basis_.gradients(x);
  const Eigen::VectorXd g = grads.transpose() * b;  // gradient of sum_i b_i H_i
  const int m = space().degrees();
  Eigen::VectorXd v(space().dim());
  v.head(m) = g.tail(m);
  v.tail(m) = -g.head(m);
  return v;
}

PhaseTrajectory integrate_flow(const LieHamiltonianSystem& system, const PhasePoint& x0, double t_end, int steps) {
  if (steps < 1) throw ValidationError("integrate_flow needs at least one step");
  if (!(t_end > 0.0)) throw ValidationError("integrate_flow needs t_end > 0");
  const PhaseSpace& space = system.space();
  if (x0.size() != space.dim()) {
    throw DimensionMismatch("initial phase point", static_cast<std::size_t>(space.dim()), static_cast<std::size_t>(x0.size()));
  }
  auto guard = [&](double t, const PhasePoint& x) {
    const std::string why = space.violation(x);
    if (!why.empty()) throw DomainExit(t, why);
  };
  guard(0.0, x0);

  const double h = t_end / steps;
  PhaseTrajectory out;
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  out.points.reserve(static_cast<std::size_t>(steps) + 1);
  out.times.push_back(0.0);
  out.points.push_back(x0);
  PhasePoint x = x0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Eigen::VectorXd k1 = system.vector_field(t, x);
    const PhasePoint x2 = x + 0.5 * h * k1;
    guard(t + 0.5 * h, x2);
    const Eigen::VectorXd k2 = system.vector_field(t + 0.5 * h, x2);
    const PhasePoint x3 = x + 0.5 * h * k2;
    guard(t + 0.5 * h, x3);
    const Eigen::VectorXd k3 = system.vector_field(t + 0.5 * h, x3);
    const PhasePoint x4 = x + h * k3;
    guard(t + h, x4);
    const Eigen::VectorXd k4 = system.vector_field(t + h, x4);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = (k + 1 == steps) ? t_end : (k + 1) * h;
    guard(t_next, x);
    out.times.push_back(t_next);
    out.points.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

FirstIntegral::FirstIntegral(FundamentalSolution fund, HamiltonianBasis basis, AlgebraVector alpha,
                             std::optional<int> period_multiple)
    : fund_(std::move(fund)), basis_(std::move(basis)), alpha_(std::move(alpha)), period_multiple_(period_multiple) {
  const auto n = static_cast<std::size_t>(fund_.algebra().dim());
  if (static_cast<std::size_t>(basis_.size()) != n) {
    throw DimensionMismatch("Hamiltonian basis", n, static_cast<std::size_t>(basis_.size()));
  }
  if (static_cast<std::size_t>(alpha_.size()) != n) {
    throw DimensionMismatch("initial algebra vector", n, static_cast<std::size_t>(alpha_.size()));
  }
  trivial_ = alpha_.cwiseAbs().maxCoeff() == 0.0;
  xi_curve_.reserve(fund_.grid().size());
  for (std::size_t k = 0; k < fund_.grid().size(); ++k) {
    xi_curve_.push_back({fund_.grid()[k], fund_.operators()[k] * alpha_});
  }
}

AlgebraVector FirstIntegral::xi(double t) const { return evaluate_F(fund_, t) * alpha_; }

double FirstIntegral::value(double t, const PhasePoint& x) const { return xi(t).dot(basis_.values(x)); }

Eigen::VectorXd FirstIntegral::gradient(double t, const PhasePoint& x) const {
  return basis_.gradients(x).transpose() * xi(t);
}

double FirstIntegral::euler_residual(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xi_curve_.size() - 2);
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const std::size_t k = pick(rng);
    const double h = xi_curve_[k + 1].t - xi_curve_[k].t;
    const Eigen::MatrixXd stepped =
        euler_rk4_step(fund_.algebra(), fund_.curve(), xi_curve_[k].t, h, Eigen::MatrixXd(xi_curve_[k].value));
    worst = std::max(worst, (stepped.col(0) - xi_curve_[k + 1].value).cwiseAbs().maxCoeff());
  }
  return worst;
}

FirstIntegral first_integral(const FundamentalSolution& fund, const HamiltonianBasis& basis, const AlgebraVector& alpha) {
  return FirstIntegral(fund, basis, alpha);
}

ConservationReport conservation_report(const std::function<double(double, const PhasePoint&)>& integral,
                                       const PhaseTrajectory& trajectory) {
  ConservationReport report;
  if (trajectory.times.empty()) return report;
  report.initial_value = integral(trajectory.times.front(), trajectory.points.front());
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const double v = integral(trajectory.times[k], trajectory.points[k]);
    report.max_abs_drift = std::max(report.max_abs_drift, std::abs(v - report.initial_value));
  }
  report.samples = trajectory.times.size();
  report.relative_drift = report.max_abs_drift / std::max(1.0, std::abs(report.initial_value));
  return report;
}

ConservationReport conservation_report(const FirstIntegral& integral, const PhaseTrajectory& trajectory) {
  return conservation_report([&](double t, const PhasePoint& x) { return integral.value(t, x); }, trajectory);
}

double poisson_isomorphism_check(const FundamentalSolution& fund, const HamiltonianBasis& basis,
                                 const AlgebraVector& alpha, const AlgebraVector& beta,
                                 std::span<const TimedPoint> samples) {
  const LieAlgebra& algebra = fund.algebra();
  const AlgebraVector gamma = algebra.bracket(alpha, beta);
  const int m = basis.space().degrees();
  double worst = 0.0;
  for (const TimedPoint& s : samples) {
    const AlgebraOperator F = evaluate_F(fund, s.t);
    const Eigen::MatrixXd grads = basis.gradients(s.x);
    const Eigen::VectorXd ga = grads.transpose() * (F * alpha);
    const Eigen::VectorXd gb = grads.transpose() * (F * beta);
    const double lhs = poisson_bracket(ga, gb, m);
    const double rhs = (F * gamma).dot(basis.values(s.x));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace lieint
