#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mpa/errors.hpp"

namespace mpa {

using Complex = std::complex<double>;

/// Spectral data of a real state matrix with distinct eigenvalues:
/// eigenvalues lambda_i together with right eigenvectors r^i (columns of
/// `right`) and left row eigenvectors l^i (rows of `left`), normalized so
/// that l^i r^j = delta_ij.
///
/// Ordering is deterministic: descending real part, then descending
/// imaginary part, with complex-conjugate pairs kept adjacent (positive
/// imaginary part first). Each r^i has unit Euclidean norm and its
/// largest-magnitude entry rotated to the positive real axis; l^i is row i
/// of right^{-1}, which enforces biorthogonality by construction.
struct EigenSystem {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right;  // column i = r^i
  Eigen::MatrixXcd left;   // row i    = l^i
  double distinct_tol = 0.0;
  Eigen::MatrixXd source;  // the matrix that was decomposed

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Scale-aware default for the minimum accepted pairwise eigenvalue gap:
/// 1e-8 * ||A||_inf.
double default_distinct_tol(const Eigen::MatrixXd& A);

/// Throws RepeatedEigenvalues if some pairwise gap is <= distinct_tol and
/// NumericalFailure if the decomposition does not converge or the computed
/// eigenvector basis is too ill-conditioned to satisfy l^i r^j = delta_ij
/// within 1e-10. Pass distinct_tol < 0 to use the default.
EigenSystem eigendecompose(const Eigen::MatrixXd& A, double distinct_tol = -1.0);

/// Modal coordinates z_i = l^i x, the inverse of x = sum_i z_i r^i.
Eigen::VectorXcd modal_coordinates(const EigenSystem& E, const Eigen::VectorXd& x);

}  // namespace mpa
