#include "mpa/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpa {

double default_resonance_tol(const Eigen::VectorXcd& lambdas) {
  double m = 0.0;
  for (int i = 0; i < lambdas.size(); ++i) m = std::max(m, std::abs(lambdas[i]));
  return 1e-9 * std::max(1.0, m);
}

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::None: return "None";
    case Theorem::PoincareDulac: return "PoincareDulac";
    case Theorem::HartmanGrobman: return "HartmanGrobman";
    case Theorem::Poincare: return "Poincare";
    case Theorem::PoincareSiegel: return "PoincareSiegel";
  }
  return "None";
}

namespace {

// Visit every multi-index with |m| = order, in lexicographic order.
template <typename Fn>
void for_each_multi_index(int n, int order, Fn fn) {
  // lexicographically smallest first: everything in the last slot
  MultiIndex m(n, 0);
  m[n - 1] = order;
  for (;;) {
    fn(m);
    int j = n - 1;
    while (j >= 0 && m[j] == 0) --j;
    if (j <= 0) break;
    // move one unit left of position j, dump the rest to the end
    const int rest = m[j] - 1;
    m[j] = 0;
    m[j - 1] += 1;
    m[n - 1] += rest;
  }
}

std::int64_t count_candidates(int n, int max_order) {
  // sum over k=2..max_order of C(k+n-1, n-1), saturating
  std::int64_t total = 0;
  for (int k = 2; k <= max_order; ++k) {
    double c = 1.0;
    for (int j = 1; j <= n - 1; ++j) c *= static_cast<double>(k + j) / j;
    total += static_cast<std::int64_t>(c);
    if (total < 0 || c > 9e17) return std::numeric_limits<std::int64_t>::max();
  }
  return total;
}

bool spectrum_real(const Eigen::VectorXcd& lambdas, double tol) {
  for (int i = 0; i < lambdas.size(); ++i)
    if (std::abs(lambdas[i].imag()) > tol) return false;
  return true;
}

}  // namespace

ResonanceReport detect_resonances(const Eigen::VectorXcd& lambdas, int max_order, double tol,
                                  std::int64_t candidate_budget) {
  const int n = static_cast<int>(lambdas.size());
  if (n <= 0) throw DimensionMismatch("empty spectrum");
  if (max_order < 2 || max_order > 20)
    throw InvalidArgument("max_order must lie in [2, 20]");
  if (tol < 0.0) tol = default_resonance_tol(lambdas);
  if (tol <= 0.0) throw InvalidArgument("resonance tolerance must be positive");

  const std::int64_t monomials = count_candidates(n, max_order);
  if (monomials > candidate_budget / n)
    throw BudgetExceeded("resonance candidate count exceeds the configured budget");

  ResonanceReport report;
  report.max_order_checked = max_order;
  report.tol = tol;

  for (int order = 2; order <= max_order; ++order) {
    for (int s = 0; s < n; ++s) {
      for_each_multi_index(n, order, [&](const MultiIndex& m) {
        Complex dot(0, 0);
        for (int j = 0; j < n; ++j) dot += static_cast<double>(m[j]) * lambdas[j];
        const double residual = std::abs(dot - lambdas[s]);
        if (residual <= tol)
          report.entries.push_back({s, m, order, residual});
        else if (residual <= 1e3 * tol)
          report.near_entries.push_back({s, m, order, residual});
      });
    }
  }

  // When every real part has the same strict sign, |Re (m, lambda)| grows
  // like |m| * min|Re|, so any resonance must have
  // |m| <= max|Re| / min|Re|: checking that far certifies all orders.
  double min_re = std::numeric_limits<double>::infinity(), max_re = 0.0;
  bool one_sign = true;
  const double sgn = lambdas[0].real() > 0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) {
    const double re = lambdas[i].real();
    if (re * sgn <= tol) one_sign = false;
    min_re = std::min(min_re, std::abs(re));
    max_re = std::max(max_re, std::abs(re));
  }
  if (one_sign && min_re > 0.0 &&
      static_cast<double>(max_order) >= max_re / min_re)
    report.complete = true;

  return report;
}

std::vector<std::pair<MultiIndex, int>> resonant_monomials(const Eigen::VectorXcd& lambdas,
                                                           int max_order, double tol) {
  const ResonanceReport report = detect_resonances(lambdas, max_order, tol);
  std::vector<std::pair<MultiIndex, int>> out;
  out.reserve(report.entries.size());
  for (const auto& e : report.entries) out.emplace_back(e.m, e.s);
  return out;
}

RegimeReport regime(const Eigen::VectorXcd& lambdas, int max_order, double tol, double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("Siegel exponent nu must be positive");
  const int n = static_cast<int>(lambdas.size());
  if (tol < 0.0) tol = default_resonance_tol(lambdas);

  RegimeReport rr;
  rr.resonances = detect_resonances(lambdas, max_order, tol);

  rr.hyperbolic = true;
  bool all_pos = true, all_neg = true;
  for (int i = 0; i < n; ++i) {
    const double re = lambdas[i].real();
    if (std::abs(re) <= tol) rr.hyperbolic = false;
    if (re <= tol) all_pos = false;
    if (re >= -tol) all_neg = false;
  }
  rr.poincare_domain = all_pos || all_neg;

  // Finite-order Siegel certificate: per-order minimum of
  // |lambda_s - (m, lambda)| |m|^nu over all candidates (a lower bound for
  // the checked orders only, never a proof of the Siegel condition).
  rr.siegel.nu = nu;
  rr.siegel.best_c = std::numeric_limits<double>::infinity();
  for (int order = 2; order <= max_order; ++order) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
      for_each_multi_index(n, order, [&](const MultiIndex& m) {
        Complex dot(0, 0);
        for (int j = 0; j < n; ++j) dot += static_cast<double>(m[j]) * lambdas[j];
        best = std::min(best, std::abs(lambdas[s] - dot) * std::pow(order, nu));
      });
    }
    rr.siegel.per_order.emplace_back(order, best);
    rr.siegel.best_c = std::min(rr.siegel.best_c, best);
  }

  if (!rr.resonances.resonant())
    rr.applicable_theorem = rr.poincare_domain ? Theorem::PoincareSiegel : Theorem::Poincare;
  else
    rr.applicable_theorem = rr.hyperbolic ? Theorem::HartmanGrobman : Theorem::None;
  return rr;
}

}  // namespace mpa
