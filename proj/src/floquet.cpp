#include "lieint/floquet.hpp"

#include "lieint/schur.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace lieint {

CoefficientCurve::CoefficientCurve(std::vector<Expression> expressions, double period, bool periodic,
                                   Environment parameters)
    : expressions_(std::move(expressions)), period_(period), periodic_(periodic), parameters_(std::move(parameters)) {
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    throw ValidationError("curve period must be positive and finite");
  }
  if (parameters_.count("t") != 0) throw ValidationError("'t' is reserved for time and cannot be a parameter");
  for (const auto& e : expressions_) {
    for (const auto& name : e.free_variables()) {
      if (name != "t" && parameters_.find(name) == parameters_.end()) throw UnboundVariable(name);
    }
  }
  if (periodic_) {
    for (int i = 0; i < size(); ++i) {
      const double gap = std::abs(value(i, period_) - value(i, 0.0));
      if (gap > 1e-9) {
        throw ValidationError("coefficient b_" + std::to_string(i + 1) + " is declared periodic but |b(T) - b(0)| = " +
                              std::to_string(gap));
      }
    }
  }
}

double CoefficientCurve::value(int i, double t) const {
  return expressions_[static_cast<std::size_t>(i)].evaluate([&](std::string_view name) -> double {
    if (name == "t") return t;
    const auto it = parameters_.find(name);
    if (it == parameters_.end()) throw UnboundVariable(std::string(name));
    return it->second;
  });
}

Eigen::VectorXd CoefficientCurve::values(double t) const {
  Eigen::VectorXd b(size());
  for (int i = 0; i < size(); ++i) b(i) = value(i, t);
  return b;
}

AlgebraVector phi_at(const LieAlgebra& algebra, const CoefficientCurve& curve, double t) {
  if (curve.size() != algebra.dim()) {
    throw DimensionMismatch("coefficient curve", static_cast<std::size_t>(algebra.dim()),
                            static_cast<std::size_t>(curve.size()));
  }
  return curve.values(t);
}

Eigen::MatrixXd euler_rk4_step(const LieAlgebra& algebra, const CoefficientCurve& curve, double t, double h,
                               const Eigen::MatrixXd& Y) {
  const AlgebraOperator a0 = -algebra.ad(phi_at(algebra, curve, t));
  const AlgebraOperator ah = -algebra.ad(phi_at(algebra, curve, t + 0.5 * h));
  const AlgebraOperator a1 = -algebra.ad(phi_at(algebra, curve, t + h));
  const Eigen::MatrixXd k1 = a0 * Y;
  const Eigen::MatrixXd k2 = ah * (Y + (0.5 * h) * k1);
  const Eigen::MatrixXd k3 = ah * (Y + (0.5 * h) * k2);
  const Eigen::MatrixXd k4 = a1 * (Y + h * k3);
  return Y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<TimedVector> integrate_euler(const LieAlgebra& algebra, const CoefficientCurve& curve,
                                         const AlgebraVector& xi0, double t_end, int steps) {
  if (steps < 1) throw ValidationError("integrate_euler needs at least one step");
  if (!(t_end > 0.0)) throw ValidationError("integrate_euler needs t_end > 0");
  if (xi0.size() != algebra.dim()) {
    throw DimensionMismatch("initial algebra vector", static_cast<std::size_t>(algebra.dim()),
                            static_cast<std::size_t>(xi0.size()));
  }
  const double h = t_end / steps;
  std::vector<TimedVector> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, xi0});
  Eigen::MatrixXd y = xi0;
  for (int k = 0; k < steps; ++k) {
    y = euler_rk4_step(algebra, curve, k * h, h, y);
    out.push_back({k + 1 == steps ? t_end : (k + 1) * h, y.col(0)});
  }
  return out;
}

FundamentalSolution fundamental_solution(const LieAlgebra& algebra, const CoefficientCurve& curve,
                                         int steps_per_period) {
  if (!curve.periodic()) throw ValidationError("fundamental_solution needs a curve declared periodic");
  if (steps_per_period < 16) throw ValidationError("steps_per_period must be at least 16");
  if (curve.size() != algebra.dim()) {
    throw DimensionMismatch("coefficient curve", static_cast<std::size_t>(algebra.dim()),
                            static_cast<std::size_t>(curve.size()));
  }
  const int n = algebra.dim();
  const double T = curve.period();
  const double h = T / steps_per_period;

  auto data = std::make_shared<FundamentalSolution::Data>(FundamentalSolution::Data{algebra, curve, {}, {}});
  data->grid.reserve(static_cast<std::size_t>(steps_per_period) + 1);
  data->operators.reserve(static_cast<std::size_t>(steps_per_period) + 1);
  data->grid.push_back(0.0);
  data->operators.push_back(AlgebraOperator::Identity(n, n));
  for (int k = 0; k < steps_per_period; ++k) {
    const double t = k * h;
    AlgebraOperator next = euler_rk4_step(algebra, curve, t, h, data->operators.back());
    const double t_next = (k + 1 == steps_per_period) ? T : (k + 1) * h;
    const double det = next.determinant();
    if (!std::isfinite(det) || std::abs(det) < kMinDeterminant) throw NonInvertibleF(t_next, det);
    data->grid.push_back(t_next);
    data->operators.push_back(std::move(next));
  }
  return FundamentalSolution(std::move(data));
}

AlgebraOperator evaluate_F(const FundamentalSolution& fund, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("evaluate_F needs a finite t >= 0");
  const double T = fund.period();
  const int N = fund.steps();
  const double h = fund.step_size();

  double periods = std::floor(t / T);
  double s = t - periods * T;
  if (s >= T) {
    periods += 1.0;
    s -= T;
  }
  if (s < 0.0) s = 0.0;
  // Snap to the period boundary when s is within rounding of T.
  if (T - s <= 1e-12 * T) {
    periods += 1.0;
    s = 0.0;
  }

  int j = std::min(static_cast<int>(std::floor(s / h)), N - 1);
  j = std::max(j, 0);
  const double tj = fund.grid()[static_cast<std::size_t>(j)];
  AlgebraOperator Fs;
  const double ds = s - tj;
  if (std::abs(ds) <= 1e-12 * h) {
    Fs = fund.operators()[static_cast<std::size_t>(j)];
  } else if (std::abs(fund.grid()[static_cast<std::size_t>(j) + 1] - s) <= 1e-12 * h) {
    Fs = fund.operators()[static_cast<std::size_t>(j) + 1];
  } else {
    Fs = euler_rk4_step(fund.algebra(), fund.curve(), tj, ds, fund.operators()[static_cast<std::size_t>(j)]);
  }

  auto k = static_cast<long long>(periods);
  if (k == 0) return Fs;
  // M^k by repeated squaring.
  const int n = fund.algebra().dim();
  AlgebraOperator power = AlgebraOperator::Identity(n, n);
  AlgebraOperator base = fund.monodromy();
  while (k > 0) {
    if (k & 1) power = power * base;
    base = base * base;
    k >>= 1;
  }
  return Fs * power;
}

// ---------------------------------------------------------------------------

std::string to_string(FloquetTag tag) {
  switch (tag) {
    case FloquetTag::Fixed: return "fixed";
    case FloquetTag::Antiperiodic: return "antiperiodic";
    case FloquetTag::Elliptic: return "elliptic";
    case FloquetTag::Null: return "null";
    case FloquetTag::OffCircle: return "off-circle";
  }
  return "unknown";
}

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Center: return "center";
    case Provenance::FixedEigenvector: return "fixed-eigenvector";
    case Provenance::AntiperiodicEigenvector: return "antiperiodic-eigenvector";
    case Provenance::DeltaConstruction: return "delta-construction";
  }
  return "unknown";
}

double FloquetClassification::max_modulus_deviation() const {
  double worst = 0.0;
  for (const auto& e : eigenpairs) worst = std::max(worst, std::abs(std::abs(e.value) - 1.0));
  return worst;
}

double FloquetClassification::max_modulus() const {
  double worst = 0.0;
  for (const auto& e : eigenpairs) worst = std::max(worst, std::abs(e.value));
  return worst;
}

std::string FloquetClassification::tag_summary() const {
  std::string out;
  for (const auto& e : eigenpairs) {
    if (!out.empty()) out += ';';
    out += to_string(e.tag);
  }
  return out;
}

FloquetClassification floquet_classify(const LieAlgebra& algebra, const AlgebraOperator& monodromy,
                                       const FloquetTolerances& tol) {
  const int n = algebra.dim();
  if (monodromy.rows() != n || monodromy.cols() != n) {
    throw DimensionMismatch("monodromy operator", static_cast<std::size_t>(n), static_cast<std::size_t>(monodromy.rows()));
  }
  const Eigen::MatrixXd& gram = algebra.killing_gram();
  FloquetClassification out;
  for (auto& pair : eigen_decompose(monodromy)) {
    FloquetEigenpair e;
    e.value = pair.value;
    e.vector = std::move(pair.vector);
    e.residual = pair.residual;
    // sum_ij G_ij a_i conj(a_j); real because G is real symmetric.
    e.admissibility = (e.vector.transpose() * gram.cast<std::complex<double>>() * e.vector.conjugate())(0, 0).real();

    const double norm2 = e.vector.squaredNorm();
    const bool on_circle = std::abs(std::abs(e.value) - 1.0) <= tol.circle;
    const bool null = std::abs(e.admissibility) <= tol.null_rel * norm2;
    if (std::abs(e.value - 1.0) <= tol.fixed) {
      e.tag = FloquetTag::Fixed;
    } else if (std::abs(e.value + 1.0) <= tol.fixed) {
      e.tag = FloquetTag::Antiperiodic;
    } else if (on_circle && !null) {
      e.tag = FloquetTag::Elliptic;
    } else if (null) {
      e.tag = FloquetTag::Null;
    } else {
      e.tag = FloquetTag::OffCircle;
    }
    out.eigenpairs.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------

AlgebraVector normalize_generator(const AlgebraVector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return v;
  AlgebraVector out = v / scale;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (std::abs(out(i)) > 1e-8) {
      if (out(i) < 0) out = -out;
      break;
    }
  }
  return out.unaryExpr([](double x) { return x == 0.0 ? 0.0 : x; });  // no negative zeros
}

double sine_of_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const Eigen::VectorXd ua = a / na, ub = b / nb;
  // Component of ua orthogonal to ub; stable for nearly parallel vectors.
  return (ua - ua.dot(ub) * ub).norm();
}

namespace {

struct Candidate {
  AlgebraVector vector;
  int period_multiple;
  Provenance provenance;
  std::size_t source;
};

}  // namespace

GeneratorSearch periodic_generators(const LieAlgebra& algebra, const AlgebraOperator& M,
                                    const FloquetClassification& classification, const CenterBasis& center_basis) {
  const int n = algebra.dim();
  if (M.rows() != n) throw DimensionMismatch("monodromy operator", static_cast<std::size_t>(n), static_cast<std::size_t>(M.rows()));
  std::vector<Candidate> candidates;
  GeneratorSearch out;

  for (int c = 0; c < center_basis.size(); ++c) {
    candidates.push_back({center_basis.vector(c), 1, Provenance::Center, static_cast<std::size_t>(c)});
  }

  auto real_candidates = [&](const FloquetEigenpair& e, std::size_t idx, int multiple, Provenance p) {
    if (e.value.imag() == 0.0) {
      candidates.push_back({e.vector.real(), multiple, p, idx});
    } else if (e.value.imag() > 0.0) {
      // Near-real conjugate pair: its real invariant plane is (anti)fixed to tolerance.
      candidates.push_back({e.vector.real(), multiple, p, idx});
      candidates.push_back({e.vector.imag(), multiple, p, idx});
    }
  };

  for (std::size_t idx = 0; idx < classification.eigenpairs.size(); ++idx) {
    if (classification.eigenpairs[idx].tag == FloquetTag::Fixed) {
      real_candidates(classification.eigenpairs[idx], idx, 1, Provenance::FixedEigenvector);
    }
  }
  for (std::size_t idx = 0; idx < classification.eigenpairs.size(); ++idx) {
    if (classification.eigenpairs[idx].tag == FloquetTag::Antiperiodic) {
      real_candidates(classification.eigenpairs[idx], idx, 2, Provenance::AntiperiodicEigenvector);
    }
  }
  for (std::size_t idx = 0; idx < classification.eigenpairs.size(); ++idx) {
    const FloquetEigenpair& e = classification.eigenpairs[idx];
    if (e.tag == FloquetTag::Null || e.tag == FloquetTag::OffCircle) {
      out.skipped.push_back({idx, "eigenpair tagged " + to_string(e.tag)});
      continue;
    }
    if (e.tag != FloquetTag::Elliptic || e.value.imag() <= 0.0) continue;
    // delta = (1/2i)[a, conj a] is real: half the imaginary part of the bracket.
    const AlgebraVector delta = 0.5 * algebra.bracket(e.vector, Eigen::VectorXcd(e.vector.conjugate())).imag();
    if (delta.cwiseAbs().maxCoeff() <= kDeltaMinNorm) {
      out.skipped.push_back({idx, "delta construction vanishes"});
      continue;
    }
    candidates.push_back({delta, 1, Provenance::DeltaConstruction, idx});
  }

  for (const Candidate& c : candidates) {
    if (c.vector.cwiseAbs().maxCoeff() == 0.0) continue;
    const AlgebraVector v = normalize_generator(c.vector);
    const double sign = c.period_multiple == 1 ? -1.0 : 1.0;
    const double residual = (M * v + sign * v).cwiseAbs().maxCoeff();
    if (residual > kGeneratorResidualTolerance) {
      out.skipped.push_back({c.source, to_string(c.provenance) + " candidate fails ||Mv " +
                                           (c.period_multiple == 1 ? "- v" : "+ v") + "|| = " + std::to_string(residual)});
      continue;
    }
    PeriodicGenerator g{v, c.period_multiple, c.provenance, residual, c.source};
    const bool duplicate = std::any_of(out.generators.begin(), out.generators.end(), [&](const PeriodicGenerator& o) {
      return sine_of_angle(o.vector, v) <= kDuplicateSine;
    });
    (duplicate ? out.duplicates : out.generators).push_back(std::move(g));
  }
  return out;
}

GeneratorSearch periodic_generators(const LieAlgebra& algebra, const FundamentalSolution& fund,
                                    const FloquetClassification& classification, const CenterBasis& center_basis) {
  return periodic_generators(algebra, fund.monodromy(), classification, center_basis);
}

FloquetAnalysis analyze_floquet(const LieAlgebra& algebra, const CoefficientCurve& curve, int steps_per_period) {
  FundamentalSolution fund = fundamental_solution(algebra, curve, steps_per_period);
  FloquetClassification cls = floquet_classify(algebra, fund.monodromy());
  CenterBasis z = center(algebra);
  GeneratorSearch search = periodic_generators(algebra, fund, cls, z);
  return {std::move(fund), std::move(cls), std::move(z), std::move(search)};
}

const PeriodicGenerator* select_generator(const GeneratorSearch& search) {
  auto rank = [](Provenance p) {
    switch (p) {
      case Provenance::FixedEigenvector: return 0;
      case Provenance::DeltaConstruction: return 1;
      case Provenance::Center: return 2;
      case Provenance::AntiperiodicEigenvector: return 3;
    }
    return 4;
  };
  const PeriodicGenerator* best = nullptr;
  for (const auto& g : search.generators) {
    if (best == nullptr) {
      best = &g;
      continue;
    }
    const auto key = [&](const PeriodicGenerator& x) { return std::make_tuple(x.period_multiple, rank(x.provenance)); };
    if (key(g) < key(*best) || (key(g) == key(*best) && g.residual < best->residual)) best = &g;
  }
  return best;
}

}  // namespace lieint
