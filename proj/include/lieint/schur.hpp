#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace lieint {

/// Real Schur decomposition A = Z T Z^T with Z orthogonal and T upper
/// quasi-triangular. Complex conjugate pairs occupy 2x2 diagonal blocks whose
/// subdiagonal entry is the only nonzero below the diagonal; every other
/// subdiagonal entry is exactly zero.
struct RealSchur {
  Eigen::MatrixXd T;
  Eigen::MatrixXd Z;
  /// Eigenvalues in diagonal order; a 2x2 block lists +imag first.
  std::vector<std::complex<double>> eigenvalues;
};

/// Householder reduction to upper Hessenberg form: A = Q H Q^T.
void hessenberg_reduce(const Eigen::MatrixXd& A, Eigen::MatrixXd& H, Eigen::MatrixXd& Q);

/// Francis double-shift QR on the Hessenberg form. Throws
/// EigenConvergenceFailure once the total iteration count reaches 100*n.
RealSchur real_schur(const Eigen::MatrixXd& A);

struct EigenPair {
  std::complex<double> value;
  /// Unit 2-norm; phase fixed so the first largest-modulus entry is real positive.
  Eigen::VectorXcd vector;
  /// ||A v - lambda v||_2.
  double residual = 0.0;
};

/// All n eigenpairs of a real square matrix, with multiplicity.
std::vector<EigenPair> eigen_decompose(const Eigen::MatrixXd& A);

}  // namespace lieint
