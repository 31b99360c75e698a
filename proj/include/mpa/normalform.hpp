#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "mpa/eigensystem.hpp"
#include "mpa/participation.hpp"
#include "mpa/polynomial.hpp"

namespace mpa {

/// Truncated change of coordinates ztilde = phi(z) that removes every
/// non-resonant term of a modal vector field up to truncation_order,
/// together with the resonant residual w: the transformed field is
/// diag(lambda) ztilde + w(ztilde) + O(degree truncation_order + 1).
struct NormalFormTransform {
  PolynomialMap phi;
  VectorField<Complex> w;
  Eigen::VectorXcd lambdas;
  int truncation_order = 2;
  /// Smallest |(m, lambda) - lambda_s| among the divisors actually used;
  /// +inf when nothing was removed.
  double small_divisor_floor = 0.0;
};

struct NormalFormOptions {
  /// Divisors with modulus <= resonance_tol classify the monomial as
  /// resonant (kept in w). Defaults to 1e-8 * max|lambda|.
  double resonance_tol = -1.0;
  /// Refuse to divide by anything smaller than this; a gap between the two
  /// tolerances turns near-resonances into SmallDivisor errors instead of
  /// blown-up coefficients. Defaults to resonance_tol.
  double divisor_tol = -1.0;
  std::int64_t term_budget = 1'000'000;
};

/// Rewrites f in eigenbasis coordinates z = V^{-1} x. The result has
/// diagonal linear part diag(lambda); correctness is self-checked by
/// comparing both fields through the coordinate change at random points.
VectorField<Complex> to_modal(const VectorField<double>& f, const EigenSystem& E);

/// Order-by-order Poincare/Poincare-Dulac normal form of a field with
/// diagonal linear part. Each degree-k homological equation removes the
/// non-resonant coefficients via h_{s,m} = f_{s,m} / ((m, lambda) - lambda_s);
/// resonant coefficients move to w. The composed transform is verified
/// coefficientwise before returning.
NormalFormTransform compute_normal_form(const VectorField<Complex>& f_modal, int order,
                                        const NormalFormOptions& opts = {});

Eigen::VectorXcd evaluate_map(const PolynomialMap& phi, const Eigen::VectorXcd& z);

/// A-priori radius of the ball on which phi - id is a contraction, from
/// coefficient norms; evaluate/invert calls inside it are safe.
double contraction_radius(const PolynomialMap& phi);

/// Fixed-point inversion z <- ztilde - (phi(z) - z) with a residual
/// guarantee ||phi(z) - ztilde|| <= tol. Throws NoConvergence outside the
/// local validity region.
Eigen::VectorXcd invert_map(const PolynomialMap& phi, const Eigen::VectorXcd& ztilde,
                            double tol = 1e-12, int max_iter = 200);

/// Conjugates phi by the eigenbasis: returns the map x -> V phi(V^{-1} x)
/// expressed in the original state coordinates, truncated at phi's degree.
PolynomialMap map_to_original(const PolynomialMap& phi, const EigenSystem& E);

/// Mode-in-state participation factors of the nonlinear system: equal to
/// classic_pf(E) whenever a linearization theorem applies (nonresonance up
/// to the transform's order, or hyperbolicity). Throws RegimeNotEstablished
/// otherwise.
ParticipationMatrix mode_in_state_nonlinear(const VectorField<double>& f, const EigenSystem& E,
                                            const NormalFormTransform& nf);

}  // namespace mpa
