#include "lieint/algebra.hpp"

#include "lieint/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace lieint {

namespace {

std::vector<std::string> default_labels(int n, std::vector<std::string> labels) {
  if (labels.empty()) {
    for (int i = 1; i <= n; ++i) labels.push_back("e" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != n) {
    throw DimensionMismatch("basis labels", static_cast<std::size_t>(n), labels.size());
  }
  return labels;
}

// Sign-fix a basis vector so that its largest-magnitude entry is positive.
void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (v(at) < 0) v = -v;
}

}  // namespace

LieAlgebra::LieAlgebra(int n, std::vector<double> constants, std::vector<std::string> labels)
    : n_(n), constants_(std::move(constants)), labels_(std::move(labels)) {
  ad_basis_.reserve(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    AlgebraOperator a = AlgebraOperator::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) a(k, j) = constant(i, j, k);
    ad_basis_.push_back(std::move(a));
  }
  killing_.resize(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) killing_(i, j) = -(ad_basis_[i] * ad_basis_[j]).trace();
}

LieAlgebra LieAlgebra::from_tensor(int n, std::vector<double> constants, std::vector<std::string> labels,
                                   double jacobi_tolerance) {
  if (n <= 0) throw ValidationError("algebra dimension must be positive, got " + std::to_string(n));
  const auto expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (constants.size() != expected) throw DimensionMismatch("structure constant tensor", expected, constants.size());
  for (double c : constants) {
    if (!std::isfinite(c)) throw ValidationError("structure constants must be finite");
  }
  LieAlgebra algebra(n, std::move(constants), default_labels(n, std::move(labels)));
  algebra.validate(jacobi_tolerance);
  return algebra;
}

LieAlgebra LieAlgebra::from_brackets(int n, const std::vector<StructureConstant>& entries,
                                     std::vector<std::string> labels, bool complete_antisymmetric,
                                     double jacobi_tolerance) {
  if (n <= 0) throw ValidationError("algebra dimension must be positive, got " + std::to_string(n));
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> tensor(size * size * size, 0.0);
  std::vector<bool> seen(tensor.size(), false);
  auto flat = [size](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * size + static_cast<std::size_t>(j)) * size + static_cast<std::size_t>(k);
  };
  for (const auto& e : entries) {
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n || e.k < 1 || e.k > n) {
      throw ValidationError("bracket index out of range 1.." + std::to_string(n) + ": (" + std::to_string(e.i) +
                            "," + std::to_string(e.j) + "," + std::to_string(e.k) + ")");
    }
    const std::size_t at = flat(e.i - 1, e.j - 1, e.k - 1);
    if (seen[at]) {
      throw ValidationError("duplicate bracket entry (" + std::to_string(e.i) + "," + std::to_string(e.j) + "," +
                            std::to_string(e.k) + ")");
    }
    seen[at] = true;
    tensor[at] = e.c;
    if (complete_antisymmetric) {
      const std::size_t mirror = flat(e.j - 1, e.i - 1, e.k - 1);
      if (seen[mirror] && tensor[mirror] != -e.c) {
        throw AntisymmetryViolation(e.i, e.j, e.k, e.c, tensor[mirror]);
      }
      seen[mirror] = true;
      tensor[mirror] = -e.c;
    }
  }
  return from_tensor(n, std::move(tensor), std::move(labels), jacobi_tolerance);
}

void LieAlgebra::validate(double jacobi_tolerance) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (constant(i, j, k) != -constant(j, i, k))
          throw AntisymmetryViolation(i + 1, j + 1, k + 1, constant(i, j, k), constant(j, i, k));

  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int r = 0; r < n_; ++r) {
          double s = 0.0;
          for (int m = 0; m < n_; ++m) {
            s += constant(i, j, m) * constant(m, k, r) + constant(j, k, m) * constant(m, i, r) +
                 constant(k, i, m) * constant(m, j, r);
          }
          if (std::abs(s) > jacobi_tolerance) throw JacobiViolation(i + 1, j + 1, k + 1, r + 1, s);
        }
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int r = 0; r < n_; ++r) {
          double s = 0.0;
          for (int m = 0; m < n_; ++m) {
            s += constant(i, j, m) * constant(m, k, r) + constant(j, k, m) * constant(m, i, r) +
                 constant(k, i, m) * constant(m, j, r);
          }
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

AlgebraVector LieAlgebra::basis_vector(int i) const {
  if (i < 0 || i >= n_) throw ValidationError("basis index out of range: " + std::to_string(i + 1));
  return AlgebraVector::Unit(n_, i);
}

AlgebraVector LieAlgebra::bracket(const AlgebraVector& x, const AlgebraVector& y) const {
  if (x.size() != n_) throw DimensionMismatch("bracket lhs", static_cast<std::size_t>(n_), static_cast<std::size_t>(x.size()));
  if (y.size() != n_) throw DimensionMismatch("bracket rhs", static_cast<std::size_t>(n_), static_cast<std::size_t>(y.size()));
  AlgebraVector out = AlgebraVector::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    if (x(i) == 0.0) continue;
    out.noalias() += x(i) * (ad_basis_[static_cast<std::size_t>(i)] * y);
  }
  return out;
}

Eigen::VectorXcd LieAlgebra::bracket(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  if (x.size() != n_) throw DimensionMismatch("bracket lhs", static_cast<std::size_t>(n_), static_cast<std::size_t>(x.size()));
  if (y.size() != n_) throw DimensionMismatch("bracket rhs", static_cast<std::size_t>(n_), static_cast<std::size_t>(y.size()));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_);
  for (int i = 0; i < n_; ++i) out.noalias() += x(i) * (ad_basis_[static_cast<std::size_t>(i)].cast<std::complex<double>>() * y);
  return out;
}

AlgebraOperator LieAlgebra::ad(const AlgebraVector& x) const {
  if (x.size() != n_) throw DimensionMismatch("ad argument", static_cast<std::size_t>(n_), static_cast<std::size_t>(x.size()));
  AlgebraOperator out = AlgebraOperator::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    if (x(i) != 0.0) out.noalias() += x(i) * ad_basis_[static_cast<std::size_t>(i)];
  }
  return out;
}

double LieAlgebra::killing(const AlgebraVector& x, const AlgebraVector& y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw DimensionMismatch("Killing form argument", static_cast<std::size_t>(n_),
                            static_cast<std::size_t>(x.size() != n_ ? x.size() : y.size()));
  }
  return x.dot(killing_ * y);
}

CenterBasis center(const LieAlgebra& algebra) {
  const int n = algebra.dim();
  // v is central iff ad_{e_i} v = 0 for every i: nullspace of the stacked ad matrices.
  Eigen::MatrixXd stacked(n * n, n);
  for (int i = 0; i < n; ++i) stacked.block(i * n, 0, n, n) = algebra.ad_basis(i);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double largest = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = kRankTolerance * (largest > 0.0 ? largest : 1.0);

  std::vector<int> null_columns;
  for (int c = 0; c < n; ++c) {
    if (sigma(c) <= threshold) null_columns.push_back(c);
  }
  CenterBasis out;
  out.vectors.resize(n, static_cast<Eigen::Index>(null_columns.size()));
  for (std::size_t a = 0; a < null_columns.size(); ++a) {
    out.vectors.col(static_cast<Eigen::Index>(a)) = svd.matrixV().col(null_columns[a]);
    canonical_sign(out.vectors.col(static_cast<Eigen::Index>(a)));
  }
  return out;
}

bool is_semisimple(const LieAlgebra& algebra) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(algebra.killing_gram());
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double largest = sigma(0);
  if (largest == 0.0) return false;
  return sigma(sigma.size() - 1) > kRankTolerance * largest;
}

QuotientAlgebra quotient_by_center(const LieAlgebra& algebra) {
  const int n = algebra.dim();
  const CenterBasis z = center(algebra);
  if (z.size() == 0) {
    return {algebra, Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n)};
  }

  // Project e_1..e_n off the center and Gram-Schmidt them in order.
  const int k = n - z.size();
  Eigen::MatrixXd section(n, k);
  int found = 0;
  for (int i = 0; i < n && found < k; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < z.size(); ++c) v -= z.vectors.col(c).dot(v) * z.vectors.col(c);
      for (int c = 0; c < found; ++c) v -= section.col(c).dot(v) * section.col(c);
    }
    const double norm = v.norm();
    if (norm <= 1e-8) continue;
    section.col(found++) = v / norm;
  }
  if (found != k) throw NumericalError("could not complete a basis of the center's complement");

  const Eigen::MatrixXd projection = section.transpose();
  const auto size = static_cast<std::size_t>(k);
  std::vector<double> tensor(size * size * size, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const Eigen::VectorXd image = projection * algebra.bracket(Eigen::VectorXd(section.col(a)), Eigen::VectorXd(section.col(b)));
      for (int c = 0; c < k; ++c) {
        const double value = image(c);
        tensor[(static_cast<std::size_t>(a) * size + static_cast<std::size_t>(b)) * size + static_cast<std::size_t>(c)] = value;
        tensor[(static_cast<std::size_t>(b) * size + static_cast<std::size_t>(a)) * size + static_cast<std::size_t>(c)] = -value;
      }
    }
  std::vector<std::string> labels;
  for (int a = 1; a <= k; ++a) labels.push_back("[K" + std::to_string(a) + "]");
  return {LieAlgebra::from_tensor(k, std::move(tensor), std::move(labels)), projection, section};
}

LieAlgebra preset_algebra(const std::string& name) {
  if (name == "sp1R") {
    // [e1,e2] = -e3, [e2,e3] = e1, [e3,e1] = e2
    return LieAlgebra::from_brackets(3,
                                     {{1, 2, 3, -1.0}, {2, 1, 3, 1.0}, {2, 3, 1, 1.0},
                                      {3, 2, 1, -1.0}, {3, 1, 2, 1.0}, {1, 3, 2, -1.0}},
                                     {"e1", "e2", "e3"});
  }
  if (name == "so3") {
    return LieAlgebra::from_brackets(3,
                                     {{1, 2, 3, 1.0}, {2, 1, 3, -1.0}, {2, 3, 1, 1.0},
                                      {3, 2, 1, -1.0}, {3, 1, 2, 1.0}, {1, 3, 2, -1.0}},
                                     {"e1", "e2", "e3"});
  }
  if (name == "heisenberg3") {
    return LieAlgebra::from_brackets(3, {{1, 2, 3, 1.0}, {2, 1, 3, -1.0}}, {"e1", "e2", "e3"});
  }
  if (name.rfind("abelian", 0) == 0 && name.size() > 7) {
    const std::string digits = name.substr(7);
    if (digits.find_first_not_of("0123456789") == std::string::npos) {
      const int n = std::stoi(digits);
      if (n >= 1 && n <= 64) return LieAlgebra::from_brackets(n, {});
    }
  }
  throw ValidationError("unknown algebra preset '" + name + "' (expected sp1R, so3, heisenberg3, abelian<n>)");
}

}  // namespace lieint
