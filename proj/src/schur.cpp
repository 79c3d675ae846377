#include "lieint/schur.hpp"

#include "lieint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lieint {

void hessenberg_reduce(const Eigen::MatrixXd& A, Eigen::MatrixXd& H, Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  H = A;
  Q = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Eigen::VectorXd v = H.col(k).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = v(0) > 0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H <- P H P with P = I - 2 v v^T acting on rows/cols k+1..n-1.
    H.bottomRightCorner(len, n - k) -= 2.0 * v * (v.transpose() * H.bottomRightCorner(len, n - k));
    H.rightCols(len) -= 2.0 * (H.rightCols(len) * v) * v.transpose();
    Q.rightCols(len) -= 2.0 * (Q.rightCols(len) * v) * v.transpose();
    H(k + 1, k) = alpha;
    H.col(k).tail(len - 1).setZero();
  }
}

// Francis double-shift iteration, following the EISPACK hqr2 structure
// (Wilkinson exceptional shifts at iterations 10 and 30), without the
// eigenvector back-substitution.
RealSchur real_schur(const Eigen::MatrixXd& A) {
  const int nn = static_cast<int>(A.rows());
  if (A.cols() != nn) throw ValidationError("real_schur needs a square matrix");
  if (!A.allFinite()) throw NumericalError("real_schur: matrix has non-finite entries");
  RealSchur out;
  out.eigenvalues.assign(static_cast<std::size_t>(nn), {0.0, 0.0});
  Eigen::MatrixXd H;
  Eigen::MatrixXd V;
  hessenberg_reduce(A, H, V);
  if (nn == 0) {
    out.T = H;
    out.Z = V;
    return out;
  }

  std::vector<double> d(static_cast<std::size_t>(nn), 0.0), e(static_cast<std::size_t>(nn), 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  const int max_total = 100 * nn;
  int total = 0;
  int n = nn - 1;
  const int low = 0;
  const int high = nn - 1;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));

  int iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(H(l, l - 1)) <= eps * s) break;
      --l;
    }
    if (l > low) H(l, l - 1) = 0.0;

    if (l == n) {
      H(n, n) = H(n, n) + exshift;
      d[static_cast<std::size_t>(n)] = H(n, n);
      e[static_cast<std::size_t>(n)] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      H(n, n) = H(n, n) + exshift;
      H(n - 1, n - 1) = H(n - 1, n - 1) + exshift;
      x = H(n, n);
      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        d[static_cast<std::size_t>(n - 1)] = x + z;
        d[static_cast<std::size_t>(n)] = d[static_cast<std::size_t>(n - 1)];
        if (z != 0.0) d[static_cast<std::size_t>(n)] = x - w / z;
        e[static_cast<std::size_t>(n - 1)] = 0.0;
        e[static_cast<std::size_t>(n)] = 0.0;
        x = H(n, n - 1);
        s = std::abs(x) + std::abs(z);
        p = x / s;
        q = z / s;
        r = std::sqrt(p * p + q * q);
        p = p / r;
        q = q / r;
        for (int j = n - 1; j < nn; ++j) {
          z = H(n - 1, j);
          H(n - 1, j) = q * z + p * H(n, j);
          H(n, j) = q * H(n, j) - p * z;
        }
        for (int i = 0; i <= n; ++i) {
          z = H(i, n - 1);
          H(i, n - 1) = q * z + p * H(i, n);
          H(i, n) = q * H(i, n) - p * z;
        }
        for (int i = low; i <= high; ++i) {
          z = V(i, n - 1);
          V(i, n - 1) = q * z + p * V(i, n);
          V(i, n) = q * V(i, n) - p * z;
        }
        H(n, n - 1) = 0.0;
        // Report the eigenvalues in the order they now sit on the diagonal.
        d[static_cast<std::size_t>(n - 1)] = H(n - 1, n - 1);
        d[static_cast<std::size_t>(n)] = H(n, n);
      } else {
        d[static_cast<std::size_t>(n - 1)] = x + p;
        d[static_cast<std::size_t>(n)] = x + p;
        e[static_cast<std::size_t>(n - 1)] = z;
        e[static_cast<std::size_t>(n)] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++total > max_total) throw EigenConvergenceFailure(max_total);
      x = H(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H(n - 1, n - 1);
        w = H(n, n - 1) * H(n - 1, n);
      }
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) H(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      int m = n - 2;
      while (m >= l) {
        z = H(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - z - r - s;
        r = H(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p = p / s;
        q = q / s;
        r = r / s;
        if (m == l) break;
        if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1))))) {
          break;
        }
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }

      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p = p / x;
          q = q / x;
          r = r / x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0) {
          if (k != m) {
            H(k, k - 1) = -s * x;
          } else if (l != m) {
            H(k, k - 1) = -H(k, k - 1);
          }
          p = p + s;
          x = p / s;
          y = q / s;
          z = r / s;
          q = q / p;
          r = r / p;
          for (int j = k; j < nn; ++j) {
            p = H(k, j) + q * H(k + 1, j);
            if (notlast) {
              p = p + r * H(k + 2, j);
              H(k + 2, j) = H(k + 2, j) - p * z;
            }
            H(k, j) = H(k, j) - p * x;
            H(k + 1, j) = H(k + 1, j) - p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * H(i, k) + y * H(i, k + 1);
            if (notlast) {
              p = p + z * H(i, k + 2);
              H(i, k + 2) = H(i, k + 2) - p * r;
            }
            H(i, k) = H(i, k) - p;
            H(i, k + 1) = H(i, k + 1) - p * q;
          }
          for (int i = low; i <= high; ++i) {
            p = x * V(i, k) + y * V(i, k + 1);
            if (notlast) {
              p = p + z * V(i, k + 2);
              V(i, k + 2) = V(i, k + 2) - p * r;
            }
            V(i, k) = V(i, k) - p;
            V(i, k + 1) = V(i, k + 1) - p * q;
          }
        }
      }
      (void)t;
    }
  }

  // Clear fill-in below the first subdiagonal and subdiagonals outside 2x2 blocks.
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j + 1 < i; ++j) H(i, j) = 0.0;
    if (i > 0 && !(e[static_cast<std::size_t>(i - 1)] > 0.0 && e[static_cast<std::size_t>(i)] < 0.0)) H(i, i - 1) = 0.0;
  }
  for (int i = 0; i < nn; ++i)
    out.eigenvalues[static_cast<std::size_t>(i)] = {d[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]};
  out.T = std::move(H);
  out.Z = std::move(V);
  return out;
}

namespace {

using cd = std::complex<double>;

// Eigenvector of the quasi-triangular T for the eigenvalue at diagonal
// position k (first row of its block when complex).
Eigen::VectorXcd schur_eigenvector(const RealSchur& schur, int k) {
  const Eigen::MatrixXd& T = schur.T;
  const int n = static_cast<int>(T.rows());
  const cd lambda = schur.eigenvalues[static_cast<std::size_t>(k)];
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(1.0, T.cwiseAbs().maxCoeff());
  auto is_block_row2 = [&](int i) { return i > 0 && T(i, i - 1) != 0.0; };

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  int upper;
  if (lambda.imag() == 0.0) {
    x(k) = 1.0;
    upper = k - 1;
  } else {
    const double a = T(k, k), b = T(k, k + 1), c = T(k + 1, k), dd = T(k + 1, k + 1);
    const cd v0a = b, v1a = lambda - a;
    const cd v0b = lambda - dd, v1b = c;
    if (std::norm(v0a) + std::norm(v1a) >= std::norm(v0b) + std::norm(v1b)) {
      x(k) = v0a;
      x(k + 1) = v1a;
    } else {
      x(k) = v0b;
      x(k + 1) = v1b;
    }
    upper = k - 1;
  }

  int i = upper;
  while (i >= 0) {
    if (is_block_row2(i)) {
      const int r0 = i - 1;
      cd rhs0 = 0.0, rhs1 = 0.0;
      for (int j = i + 1; j < n; ++j) {
        rhs0 -= T(r0, j) * x(j);
        rhs1 -= T(i, j) * x(j);
      }
      const cd a = T(r0, r0) - lambda, b = T(r0, i), c = T(i, r0), dd = T(i, i) - lambda;
      cd det = a * dd - b * c;
      if (std::abs(det) < tiny) det = tiny;
      x(r0) = (rhs0 * dd - b * rhs1) / det;
      x(i) = (a * rhs1 - c * rhs0) / det;
      i -= 2;
    } else {
      cd rhs = 0.0;
      for (int j = i + 1; j < n; ++j) rhs -= T(i, j) * x(j);
      cd den = T(i, i) - lambda;
      if (std::abs(den) < tiny) den = tiny;
      x(i) = rhs / den;
      --i;
    }
    const double scale = x.cwiseAbs().maxCoeff();
    if (scale > 1e100) x /= scale;
  }
  return schur.Z.cast<cd>() * x;
}

double residual_of(const Eigen::MatrixXcd& A, cd lambda, const Eigen::VectorXcd& v) {
  return (A * v - lambda * v).norm();
}

void normalize_phase(Eigen::VectorXcd& v) {
  v.normalize();
  const double largest = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= (1.0 - 1e-8) * largest) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

}  // namespace

std::vector<EigenPair> eigen_decompose(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw ValidationError("eigen_decompose needs a square matrix");
  const RealSchur schur = real_schur(A);
  const Eigen::MatrixXcd Ac = A.cast<cd>();
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());

  std::vector<EigenPair> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const cd lambda = schur.eigenvalues[static_cast<std::size_t>(k)];
    if (lambda.imag() < 0.0) continue;  // filled from its conjugate partner

    Eigen::VectorXcd v = schur_eigenvector(schur, k);
    v.normalize();
    double res = residual_of(Ac, lambda, v);

    // Inverse iteration refinement; a step is kept only if it lowers the residual.
    const cd shift = lambda + 1e-14 * scale;
    Eigen::MatrixXcd shifted = Ac;
    shifted.diagonal().array() -= shift;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    for (int step = 0; step < 3 && res > 0.0; ++step) {
      Eigen::VectorXcd w = lu.solve(v);
      if (!w.allFinite() || w.norm() == 0.0) break;
      w.normalize();
      const double wres = residual_of(Ac, lambda, w);
      if (!(wres < res)) break;
      v = std::move(w);
      res = wres;
    }

    if (lambda.imag() == 0.0) v = v.real().cast<cd>();
    normalize_phase(v);
    res = residual_of(Ac, lambda, v);
    out[static_cast<std::size_t>(k)] = {lambda, v, res};
    if (lambda.imag() > 0.0) {
      const Eigen::VectorXcd partner = v.conjugate();
      out[static_cast<std::size_t>(k + 1)] = {std::conj(lambda), partner, residual_of(Ac, std::conj(lambda), partner)};
    }
  }
  return out;
}

}  // namespace lieint
