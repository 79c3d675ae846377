#pragma once

#include "lieint/algebra.hpp"
#include "lieint/errors.hpp"
#include "lieint/expr.hpp"

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace lieint {

/// b_1(t)..b_n(t) with a declared period; phi(t) = sum_i b_i(t) e_i.
///
/// Expressions may use `t` and any name bound in `parameters`. When the curve is
/// declared periodic, b(T) and b(0) must agree to 1e-9 (a sampled check; full
/// periodicity is the caller's assertion).
class CoefficientCurve {
 public:
  CoefficientCurve(std::vector<Expression> expressions, double period, bool periodic = true,
                   Environment parameters = {});

  int size() const { return static_cast<int>(expressions_.size()); }
  double period() const { return period_; }
  bool periodic() const { return periodic_; }
  const std::vector<Expression>& expressions() const { return expressions_; }
  const Environment& parameters() const { return parameters_; }

  /// (b_1(t), ..., b_n(t)).
  Eigen::VectorXd values(double t) const;
  double value(int i, double t) const;

 private:
  std::vector<Expression> expressions_;
  double period_;
  bool periodic_;
  Environment parameters_;
};

struct TimedVector {
  double t;
  AlgebraVector value;
};

AlgebraVector phi_at(const LieAlgebra& algebra, const CoefficientCurve& curve, double t);

/// Fixed-step classical RK4 on d xi/dt = -[phi(t), xi]. Returns steps + 1 nodes.
std::vector<TimedVector> integrate_euler(const LieAlgebra& algebra, const CoefficientCurve& curve,
                                         const AlgebraVector& xi0, double t_end, int steps);

/// One RK4 step of dY/dt = -ad_{phi(t)} Y for a block of columns Y.
Eigen::MatrixXd euler_rk4_step(const LieAlgebra& algebra, const CoefficientCurve& curve, double t, double h,
                               const Eigen::MatrixXd& Y);

/// F(t) on a uniform grid over one period, with xi(t) = F(t) xi(0) and M = F(T).
///
/// Column i of F(t) is the image of e_i.
/// Cheap to copy; the node data is shared and immutable.
class FundamentalSolution {
 public:
  const LieAlgebra& algebra() const { return data_->algebra; }
  const CoefficientCurve& curve() const { return data_->curve; }
  const std::vector<double>& grid() const { return data_->grid; }
  const std::vector<AlgebraOperator>& operators() const { return data_->operators; }
  const AlgebraOperator& monodromy() const { return data_->operators.back(); }
  double period() const { return data_->curve.period(); }
  int steps() const { return static_cast<int>(data_->grid.size()) - 1; }
  double step_size() const { return period() / steps(); }

 private:
  struct Data {
    LieAlgebra algebra;
    CoefficientCurve curve;
    std::vector<double> grid;
    std::vector<AlgebraOperator> operators;
  };
  explicit FundamentalSolution(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  friend FundamentalSolution fundamental_solution(const LieAlgebra&, const CoefficientCurve&, int);

  std::shared_ptr<const Data> data_;
};

inline constexpr double kMinDeterminant = 1e-8;

/// Integrates dF/dt = -ad_{phi(t)} F, F(0) = I over one period with RK4.
/// Requires a periodic curve and steps_per_period >= 16; throws NonInvertibleF
/// if |det F(t_k)| drops below 1e-8.
FundamentalSolution fundamental_solution(const LieAlgebra& algebra, const CoefficientCurve& curve,
                                         int steps_per_period);

/// F(t) for any t >= 0 as F(s) M^k with t = kT + s. Off-grid F(s) comes from a
/// single RK4 step out of the stored node at or below s.
AlgebraOperator evaluate_F(const FundamentalSolution& fund, double t);

// ---------------------------------------------------------------------------
// Floquet classification

enum class FloquetTag { Fixed, Antiperiodic, Elliptic, Null, OffCircle };

std::string to_string(FloquetTag tag);

struct FloquetTolerances {
  double fixed = 1e-6;       // |lambda - 1|, |lambda + 1|
  double circle = 1e-6;      // ||lambda| - 1|
  double null_rel = 1e-8;    // |<a, conj a>_K| <= null_rel * |a|^2
};

struct FloquetEigenpair {
  std::complex<double> value;
  Eigen::VectorXcd vector;  // unit 2-norm
  double admissibility = 0.0;
  FloquetTag tag = FloquetTag::OffCircle;
  double residual = 0.0;  // ||M a - lambda a||_2
};

struct FloquetClassification {
  std::vector<FloquetEigenpair> eigenpairs;

  /// max_k ||lambda_k| - 1|.
  double max_modulus_deviation() const;
  double max_modulus() const;
  /// Tags joined with ';' in eigenpair order.
  std::string tag_summary() const;
};

FloquetClassification floquet_classify(const LieAlgebra& algebra, const AlgebraOperator& monodromy,
                                       const FloquetTolerances& tolerances = {});

// ---------------------------------------------------------------------------
// Periodic generators

enum class Provenance { Center, FixedEigenvector, AntiperiodicEigenvector, DeltaConstruction };

std::string to_string(Provenance provenance);

/// A real vector whose Euler orbit F(t) v has period T (period_multiple 1) or 2T (2).
struct PeriodicGenerator {
  AlgebraVector vector;  // infinity norm 1, first nonzero entry positive
  int period_multiple = 1;
  Provenance provenance = Provenance::Center;
  double residual = 0.0;       // ||M v - v||_inf or ||M v + v||_inf
  std::size_t source = 0;      // eigenpair index, or center column for Provenance::Center
};

struct SkippedCandidate {
  std::size_t source;
  std::string reason;
};

struct GeneratorSearch {
  std::vector<PeriodicGenerator> generators;
  /// Valid candidates dropped as linearly dependent on an accepted generator.
  std::vector<PeriodicGenerator> duplicates;
  /// Null/off-circle eigenpairs and candidates failing their invariant.
  std::vector<SkippedCandidate> skipped;
};

inline constexpr double kGeneratorResidualTolerance = 1e-8;
inline constexpr double kDuplicateSine = 1e-6;
inline constexpr double kDeltaMinNorm = 1e-10;

GeneratorSearch periodic_generators(const LieAlgebra& algebra, const FundamentalSolution& fund,
                                    const FloquetClassification& classification, const CenterBasis& center_basis);

/// Variant that only needs the monodromy operator.
GeneratorSearch periodic_generators(const LieAlgebra& algebra, const AlgebraOperator& monodromy,
                                    const FloquetClassification& classification, const CenterBasis& center_basis);

/// Infinity-norm normalization with the first entry above 1e-8 made positive.
AlgebraVector normalize_generator(const AlgebraVector& v);

/// sin of the angle between two nonzero vectors.
double sine_of_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

class NoGeneratorFound : public NumericalError {
 public:
  explicit NoGeneratorFound(FloquetClassification classification)
      : NumericalError("no periodic generator found; multipliers: " + classification.tag_summary()),
        classification(std::move(classification)) {}
  FloquetClassification classification;
};

/// Fundamental solution, classification, center and generator search in one go.
struct FloquetAnalysis {
  FundamentalSolution fund;
  FloquetClassification classification;
  CenterBasis center;
  GeneratorSearch search;
};

FloquetAnalysis analyze_floquet(const LieAlgebra& algebra, const CoefficientCurve& curve, int steps_per_period);

/// Period-1 generators first (fixed eigenvector, then delta construction, then
/// center; smallest residual within a class), otherwise the best period-2 one.
const PeriodicGenerator* select_generator(const GeneratorSearch& search);

}  // namespace lieint
