#include "mpa/eigensystem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mpa {

double default_distinct_tol(const Eigen::MatrixXd& A) {
  const double inf_norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  return 1e-8 * inf_norm;
}

namespace {

// Rotate v so its largest-magnitude entry lies on the positive real axis,
// then scale to unit norm. Ties on magnitude resolve to the lowest index.
Eigen::VectorXcd canonical_phase(const Eigen::VectorXcd& v) {
  int pivot = 0;
  double best = -1.0;
  for (int j = 0; j < v.size(); ++j) {
    const double a = std::abs(v[j]);
    if (a > best) {
      best = a;
      pivot = j;
    }
  }
  const Complex p = v[pivot];
  const Complex phase = (std::abs(p) == 0.0) ? Complex(1, 0) : p / std::abs(p);
  Eigen::VectorXcd out = v / phase;
  return out / out.norm();
}

}  // namespace

EigenSystem eigendecompose(const Eigen::MatrixXd& A, double distinct_tol) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw DimensionMismatch("state matrix must be square and non-empty");
  if (!A.allFinite())
    throw InvalidArgument("state matrix has non-finite entries");

  const int n = static_cast<int>(A.rows());
  if (distinct_tol < 0.0) distinct_tol = default_distinct_tol(A);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("eigenvalue iteration did not converge");

  Eigen::VectorXcd lambda = solver.eigenvalues();
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  // Descending real part, then descending imaginary part. Sorting by |Im|
  // before the sign keeps a conjugate pair adjacent even when a third
  // eigenvalue shares its real part.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const Complex la = lambda[a], lb = lambda[b];
    if (la.real() != lb.real()) return la.real() > lb.real();
    const double ia = std::abs(la.imag()), ib = std::abs(lb.imag());
    if (ia != ib) return ia > ib;
    return la.imag() > lb.imag();
  });

  EigenSystem E;
  E.eigenvalues.resize(n);
  E.right.resize(n, n);
  for (int i = 0; i < n; ++i) {
    E.eigenvalues[i] = lambda[idx[i]];
    E.right.col(i) = canonical_phase(vecs.col(idx[i]));
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      min_gap = std::min(min_gap, std::abs(E.eigenvalues[i] - E.eigenvalues[j]));
  if (n > 1 && min_gap <= distinct_tol)
    throw RepeatedEigenvalues("minimum eigenvalue gap " + std::to_string(min_gap) +
                              " is within distinct_tol " + std::to_string(distinct_tol));

  // Make conjugate pairs exact: the partner of a positive-imaginary mode is
  // its entrywise conjugate.
  for (int i = 0; i + 1 < n; ++i) {
    if (E.eigenvalues[i].imag() > 0.0 &&
        std::abs(E.eigenvalues[i + 1] - std::conj(E.eigenvalues[i])) <=
            std::max(distinct_tol, 1e-12 * std::abs(E.eigenvalues[i]))) {
      E.eigenvalues[i + 1] = std::conj(E.eigenvalues[i]);
      E.right.col(i + 1) = E.right.col(i).conjugate();
      ++i;
    }
  }

  E.left = E.right.partialPivLu().inverse();
  E.distinct_tol = distinct_tol;
  E.source = A;

  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  const double biorth = (E.left * E.right - I).cwiseAbs().maxCoeff();
  const double recon = (E.right * E.left - I).cwiseAbs().maxCoeff();
  if (biorth > 1e-10 || recon > 1e-9)
    throw NumericalFailure("eigenvector basis too ill-conditioned: l^i r^j residual " +
                           std::to_string(biorth) + ", reconstruction residual " +
                           std::to_string(recon));
  return E;
}

Eigen::VectorXcd modal_coordinates(const EigenSystem& E, const Eigen::VectorXd& x) {
  if (x.size() != E.n())
    throw DimensionMismatch("state vector has dimension " + std::to_string(x.size()) +
                            ", expected " + std::to_string(E.n()));
  return E.left * x.cast<Complex>();
}

}  // namespace mpa
