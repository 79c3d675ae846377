#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace lieint {

/// Coordinates of an element of the algebra in its basis e_1..e_n.
using AlgebraVector = Eigen::VectorXd;
/// Linear map on the algebra; column j holds the image of e_j.
using AlgebraOperator = Eigen::MatrixXd;

/// One structure constant [e_i, e_j] += c e_k, 1-based as in every file format.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

inline constexpr double kDefaultJacobiTolerance = 1e-12;

/// A finite-dimensional real Lie algebra given by its structure constants
/// lambda_ij^k, meaning [e_i, e_j] = sum_k lambda_ij^k e_k.
///
/// Construction validates antisymmetry (exact) and the Jacobi identity
/// (absolute tolerance); an instance is immutable afterwards.
class LieAlgebra {
 public:
  /// `constants` is the dense n*n*n tensor, flat index (i*n + j)*n + k with
  /// 0-based i, j, k.
  static LieAlgebra from_tensor(int n, std::vector<double> constants,
                                std::vector<std::string> labels = {},
                                double jacobi_tolerance = kDefaultJacobiTolerance);

  /// Sparse construction. Unless `complete_antisymmetric` is set, both orderings
  /// (i,j,k) and (j,i,k) must be listed explicitly.
  static LieAlgebra from_brackets(int n, const std::vector<StructureConstant>& entries,
                                  std::vector<std::string> labels = {},
                                  bool complete_antisymmetric = false,
                                  double jacobi_tolerance = kDefaultJacobiTolerance);

  int dim() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// 0-based access.
  double constant(int i, int j, int k) const { return constants_[index(i, j, k)]; }
  const std::vector<double>& tensor() const { return constants_; }

  AlgebraVector basis_vector(int i) const;

  AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) const;
  Eigen::VectorXcd bracket(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  /// ad_x as a matrix: column j is [x, e_j].
  AlgebraOperator ad(const AlgebraVector& x) const;
  /// ad_{e_i}, cached at construction.
  const AlgebraOperator& ad_basis(int i) const { return ad_basis_[static_cast<std::size_t>(i)]; }

  /// Gram matrix of <x,y>_K = -tr(ad_x ad_y).
  const Eigen::MatrixXd& killing_gram() const { return killing_; }
  double killing(const AlgebraVector& x, const AlgebraVector& y) const;

  /// Largest |Jacobi residual| over all index quadruples.
  double jacobi_residual() const;

 private:
  LieAlgebra(int n, std::vector<double> constants, std::vector<std::string> labels);
  void validate(double jacobi_tolerance) const;
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(k);
  }

  int n_;
  std::vector<double> constants_;
  std::vector<std::string> labels_;
  std::vector<AlgebraOperator> ad_basis_;
  Eigen::MatrixXd killing_;
};

/// Orthonormal basis of the center, one vector per column. May have zero columns.
struct CenterBasis {
  Eigen::MatrixXd vectors;

  int size() const { return static_cast<int>(vectors.cols()); }
  AlgebraVector vector(int i) const { return vectors.col(i); }
};

/// Relative singular-value threshold for every rank decision in this module.
inline constexpr double kRankTolerance = 1e-10;

CenterBasis center(const LieAlgebra& algebra);

bool is_semisimple(const LieAlgebra& algebra);

struct QuotientAlgebra {
  LieAlgebra algebra;
  /// (n - dim z) x n, maps coordinates of g to coordinates of g/z.
  Eigen::MatrixXd projection;
  /// n x (n - dim z); column a embeds quotient basis vector a back into g.
  Eigen::MatrixXd section;
};

/// g/z with constants induced on the orthonormalized Euclidean complement of the center.
QuotientAlgebra quotient_by_center(const LieAlgebra& algebra);

/// Bundled algebras: "sp1R", "so3", "heisenberg3", "abelian<n>".
LieAlgebra preset_algebra(const std::string& name);

}  // namespace lieint
