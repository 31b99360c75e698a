#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mpa/eigensystem.hpp"
#include "mpa/polynomial.hpp"

namespace mpa {

/// One eigenvalue relation (m, lambda) = lambda_s with |m| >= 2.
struct ResonanceEntry {
  int s = 0;  // 0-based mode index
  MultiIndex m;
  int order = 0;
  double residual = 0.0;  // |(m, lambda) - lambda_s|
};

struct ResonanceReport {
  std::vector<ResonanceEntry> entries;       // residual <= tol
  std::vector<ResonanceEntry> near_entries;  // residual in (tol, 1e3 tol]: small divisors ahead
  int max_order_checked = 0;
  double tol = 0.0;
  bool resonant() const { return !entries.empty(); }
  /// True when the spectrum certifies that no resonance can exist at ANY
  /// order, not just the checked ones (possible when all real parts share
  /// one sign: |m| is then bounded by max|Re|/min|Re|).
  bool complete = false;
};

/// Per-order small-divisor record: min over (s, m) of |lambda_s - (m, lambda)| * |m|^nu.
struct SiegelDiagnostic {
  double nu = 0.0;
  double best_c = 0.0;  // minimum of the scaled gaps over all checked orders
  std::vector<std::pair<int, double>> per_order;
};

enum class Theorem { None, PoincareDulac, HartmanGrobman, Poincare, PoincareSiegel };

std::string theorem_name(Theorem t);

struct RegimeReport {
  bool hyperbolic = false;       // no Re lambda_i = 0 within tol
  bool poincare_domain = false;  // all Re > 0 or all Re < 0
  SiegelDiagnostic siegel;       // finite-order certificate, diagnostic only
  Theorem applicable_theorem = Theorem::None;
  ResonanceReport resonances;
};

/// Scale-aware default tolerance: 1e-9 * max(1, max |lambda_i|).
double default_resonance_tol(const Eigen::VectorXcd& lambdas);

/// Exhaustive enumeration of resonances with 2 <= |m| <= max_order, in
/// lexicographic (order, s, m) order. Pass tol < 0 for the default.
ResonanceReport detect_resonances(const Eigen::VectorXcd& lambdas, int max_order,
                                  double tol = -1.0, std::int64_t candidate_budget = 20'000'000);

/// Resonant monomials x^m e_s, in bijection with the report entries.
std::vector<std::pair<MultiIndex, int>> resonant_monomials(const Eigen::VectorXcd& lambdas,
                                                           int max_order, double tol = -1.0);

/// Classifies which linearization/equivalence theorem is applicable and
/// attaches the Siegel small-divisor diagnostic for the given nu.
RegimeReport regime(const Eigen::VectorXcd& lambdas, int max_order, double tol, double nu);

}  // namespace mpa
