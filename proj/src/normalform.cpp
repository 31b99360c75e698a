#include "mpa/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mpa/resonance.hpp"
#include "mpa/sampling.hpp"

namespace mpa {

namespace {

using CPoly = Polynomial<Complex>;
using CField = std::vector<CPoly>;

void check_budget(const CField& f, std::int64_t budget) {
  std::size_t t = 0;
  for (const auto& p : f) t += p.term_count();
  if (static_cast<std::int64_t>(t) > budget)
    throw BudgetExceeded("normal-form term count " + std::to_string(t) +
                         " exceeds the budget of " + std::to_string(budget));
}

CField substitute_all(const CField& f, const CField& args, int trunc) {
  CField out;
  out.reserve(f.size());
  for (const auto& p : f) out.push_back(substitute(p, args, trunc));
  return out;
}

// Jacobian matrix of a polynomial map g (as n x n polynomials).
std::vector<CField> jacobian(const CField& g) {
  const int n = static_cast<int>(g.size());
  std::vector<CField> J(n, CField(n));
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j) J[s][j] = g[s].partial(j);
  return J;
}

CField matvec(const std::vector<CField>& J, const CField& v, int trunc) {
  const int n = static_cast<int>(J.size());
  CField out(n, CPoly(v.front().vars()));
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j) out[s] += multiply(J[s][j], v[j], trunc);
  return out;
}

// (I + Dg)^{-1} v via the Neumann series sum_p (-Dg)^p v, exact under
// truncation because Dg has positive minimum degree.
CField apply_inverse_jacobian(const CField& g, const CField& v, int trunc,
                              std::int64_t budget) {
  const auto J = jacobian(g);
  CField out = v;
  CField term = v;
  for (int p = 0; p < trunc + 1; ++p) {
    term = matvec(J, term, trunc);
    for (auto& comp : term) comp *= Complex(-1, 0);
    bool empty = true;
    for (const auto& comp : term)
      if (!comp.empty()) empty = false;
    if (empty) break;
    for (int s = 0; s < static_cast<int>(out.size()); ++s) out[s] += term[s];
    check_budget(out, budget);
  }
  return out;
}

// Field of the transformed system when old = new + g(new):
//   F_new(y) = (I + Dg(y))^{-1} F(y + g(y)), truncated.
CField push_through(const CField& F, const CField& g, int trunc, std::int64_t budget) {
  const int n = static_cast<int>(F.size());
  CField id_plus_g(n, CPoly(n));
  for (int s = 0; s < n; ++s) {
    MultiIndex m(n, 0);
    m[s] = 1;
    id_plus_g[s].set(m, Complex(1, 0));
    id_plus_g[s] += g[s];
  }
  CField composed = substitute_all(F, id_plus_g, trunc);
  check_budget(composed, budget);
  return apply_inverse_jacobian(g, composed, trunc, budget);
}

// Truncated compositional inverse of id + g: the map id + kappa with
// (id + kappa) o (id + g) = id up to the truncation order.
CField invert_series(const CField& g, int trunc) {
  const int n = static_cast<int>(g.size());
  CField id_plus_g(n, CPoly(n));
  for (int s = 0; s < n; ++s) {
    MultiIndex m(n, 0);
    m[s] = 1;
    id_plus_g[s].set(m, Complex(1, 0));
    id_plus_g[s] += g[s];
  }
  CField kappa(n, CPoly(n));
  for (int iter = 0; iter < trunc; ++iter) {
    // kappa <- -g o (id + kappa)
    CField id_plus_kappa(n, CPoly(n));
    for (int s = 0; s < n; ++s) {
      MultiIndex m(n, 0);
      m[s] = 1;
      id_plus_kappa[s].set(m, Complex(1, 0));
      id_plus_kappa[s] += kappa[s];
    }
    CField next = substitute_all(g, id_plus_kappa, trunc);
    for (auto& comp : next) comp *= Complex(-1, 0);
    kappa = std::move(next);
  }
  return kappa;
}

double field_scale(const CField& f) {
  double s = 0.0;
  for (const auto& p : f) s = std::max(s, p.max_abs_coeff());
  return std::max(1.0, s);
}

}  // namespace

VectorField<Complex> to_modal(const VectorField<double>& f, const EigenSystem& E) {
  f.validate();
  const int n = E.n();
  if (f.n != n) throw DimensionMismatch("field dimension does not match the eigensystem");

  const Eigen::MatrixXd A = f.linear_part();
  const double scale = std::max(1.0, E.source.cwiseAbs().maxCoeff());
  if (((A - E.source).cwiseAbs().maxCoeff()) > 1e-9 * scale)
    throw LinearPartMismatch("the field's linear part differs from the decomposed matrix");

  // Substitute x = V z, then left-multiply by V^{-1} = L.
  CField vz(n, CPoly(n));
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      if (E.right(r, j) == Complex(0, 0)) continue;
      MultiIndex m(n, 0);
      m[j] = 1;
      vz[r].add(m, E.right(r, j));
    }

  VectorField<Complex> out(n, f.degree);
  std::vector<CPoly> f_of_vz(n, CPoly(n));
  for (int r = 0; r < n; ++r)
    f_of_vz[r] = substitute(f.components[r].cast<Complex>(), vz, f.degree);
  for (int s = 0; s < n; ++s) {
    CPoly acc(n);
    for (int r = 0; r < n; ++r) {
      CPoly t = f_of_vz[r];
      t *= E.left(s, r);
      acc += t;
    }
    acc.prune(0.0);
    out.components[s] = std::move(acc);
  }

  // Exactness self-check: V f_modal(V^{-1} x) must reproduce f(x).
  const InitialConditionModel probe = InitialConditionModel::uniform_sphere(n, 0.1);
  detail::BaseDrawGenerator probe_gen(probe, 0x746f6d6f64616cULL, 0);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd x = probe_gen.next();
    const Eigen::VectorXcd z = E.left * x.cast<Complex>();
    const Eigen::VectorXcd lhs = E.right * out.evaluate(z);
    const Eigen::VectorXcd rhs = f.evaluate(x).cast<Complex>();
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
      throw NumericalFailure("modal change of coordinates failed the point-evaluation check");
  }
  return out;
}

NormalFormTransform compute_normal_form(const VectorField<Complex>& f_modal, int order,
                                        const NormalFormOptions& opts) {
  f_modal.validate();
  const int n = f_modal.n;
  if (order < 2) throw InvalidArgument("normal-form order must be at least 2");
  if (order > 8) throw InvalidArgument("normal-form order capped at 8");

  // Linear part must be diagonal; its diagonal is the spectrum.
  Eigen::VectorXcd lambdas(n);
  {
    const Eigen::MatrixXcd A = f_modal.linear_part();
    double offdiag = 0.0, diag = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const double a = std::abs(A(r, c));
        if (r == c)
          diag = std::max(diag, a);
        else
          offdiag = std::max(offdiag, a);
      }
    if (offdiag > 1e-10 * std::max(1.0, diag))
      throw LinearPartMismatch("normal-form input must have a diagonal linear part");
    lambdas = A.diagonal();
  }

  double max_abs_lambda = 0.0;
  for (int i = 0; i < n; ++i) max_abs_lambda = std::max(max_abs_lambda, std::abs(lambdas[i]));
  double res_tol = opts.resonance_tol >= 0.0 ? opts.resonance_tol
                                             : 1e-8 * std::max(1.0, max_abs_lambda);
  double div_tol = opts.divisor_tol >= 0.0 ? opts.divisor_tol : res_tol;
  if (div_tol < res_tol) div_tol = res_tol;

  CField F = f_modal.components;
  for (auto& p : F) p = p.truncated(order);

  VectorField<Complex> w(n, order);
  CField back_g(n, CPoly(n));  // z = y + back_g(y), the composed stage maps
  bool have_back = false;
  double divisor_floor = std::numeric_limits<double>::infinity();

  for (int k = 2; k <= order; ++k) {
    CField h(n, CPoly(n));
    bool stage_nonempty = false;
    for (int s = 0; s < n; ++s) {
      for (const auto& [m, c] : F[s].terms()) {
        if (index_order(m) != k) continue;
        Complex dot(0, 0);
        for (int j = 0; j < n; ++j) dot += static_cast<double>(m[j]) * lambdas[j];
        const Complex divisor = dot - lambdas[s];
        const double mag = std::abs(divisor);
        if (mag <= res_tol) {
          w.components[s].add(m, c);
        } else if (mag < div_tol) {
          throw SmallDivisor("divisor " + std::to_string(mag) + " for a degree-" +
                             std::to_string(k) +
                             " term lies between the resonance and divisor tolerances");
        } else {
          h[s].add(m, c / divisor);
          divisor_floor = std::min(divisor_floor, mag);
          stage_nonempty = true;
        }
      }
    }
    if (stage_nonempty) {
      F = push_through(F, h, order, opts.term_budget);
      // compose the backward map: back <- back o (id + h)
      if (!have_back) {
        back_g = h;
        have_back = true;
      } else {
        CField id_plus_h(n, CPoly(n));
        for (int s = 0; s < n; ++s) {
          MultiIndex m(n, 0);
          m[s] = 1;
          id_plus_h[s].set(m, Complex(1, 0));
          id_plus_h[s] += h[s];
        }
        CField composed = substitute_all(back_g, id_plus_h, order);
        for (int s = 0; s < n; ++s) back_g[s] = composed[s] + h[s];
      }
      check_budget(back_g, opts.term_budget);
    }
  }

  // Verification: pushing the original field through the composed backward
  // map must give diag(lambda) y + w(y) coefficientwise.
  {
    CField verified = have_back
                          ? push_through(f_modal.components, back_g, order, opts.term_budget)
                          : f_modal.components;
    CField expect(n, CPoly(n));
    for (int s = 0; s < n; ++s) {
      MultiIndex m(n, 0);
      m[s] = 1;
      expect[s].set(m, lambdas[s]);
      expect[s] += w.components[s];
    }
    const double tol = 1e-10 * field_scale(f_modal.components);
    for (int s = 0; s < n; ++s) {
      CPoly diff = verified[s].truncated(order) - expect[s];
      diff.prune(tol);
      if (!diff.empty())
        throw NumericalFailure("normal-form verification residual exceeds 1e-10");
    }
  }

  NormalFormTransform nf;
  nf.phi = PolynomialMap::identity(n, order);
  if (have_back) {
    const CField kappa = invert_series(back_g, order);
    for (int s = 0; s < n; ++s) {
      nf.phi.components[s] += kappa[s];
      nf.phi.components[s].prune(0.0);
    }
  }
  nf.phi.degree = order;
  nf.w = std::move(w);
  nf.w.degree = order;
  nf.lambdas = lambdas;
  nf.truncation_order = order;
  nf.small_divisor_floor = divisor_floor;
  return nf;
}

Eigen::VectorXcd evaluate_map(const PolynomialMap& phi, const Eigen::VectorXcd& z) {
  if (z.size() != phi.n) throw DimensionMismatch("point dimension does not match the map");
  Eigen::VectorXcd out(phi.n);
  for (int s = 0; s < phi.n; ++s) out[s] = phi.components[s].evaluate(z);
  return out;
}

double contraction_radius(const PolynomialMap& phi) {
  // Largest R with sup_{||z|| <= R} ||D(phi - id)||_inf <= 1/2, bounding the
  // derivative row sums by sum |c| |m| R^{|m|-1}.
  struct Term {
    double c;
    int order;
  };
  std::vector<Term> terms;
  for (int s = 0; s < phi.n; ++s)
    for (const auto& [m, c] : phi.components[s].terms()) {
      const int o = index_order(m);
      if (o >= 2) terms.push_back({std::abs(c) * o, o});
    }
  if (terms.empty()) return std::numeric_limits<double>::infinity();

  auto derivative_bound = [&](double r) {
    double b = 0.0;
    for (const auto& t : terms) b += t.c * std::pow(r, t.order - 1);
    return b;
  };
  double lo = 0.0, hi = 1.0;
  while (derivative_bound(hi) < 0.5 && hi < 1e12) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (derivative_bound(mid) < 0.5 ? lo : hi) = mid;
  }
  return lo;
}

Eigen::VectorXcd invert_map(const PolynomialMap& phi, const Eigen::VectorXcd& ztilde,
                            double tol, int max_iter) {
  if (ztilde.size() != phi.n) throw DimensionMismatch("point dimension does not match the map");
  Eigen::VectorXcd z = ztilde;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXcd image = evaluate_map(phi, z);
    const double residual = (image - ztilde).norm();
    if (residual <= tol) return z;
    z -= image - ztilde;
    if (!z.allFinite())
      throw NoConvergence("fixed-point iterate diverged; point is outside the validity region");
  }
  throw NoConvergence("map inversion did not reach the requested residual in " +
                      std::to_string(max_iter) + " iterations");
}

PolynomialMap map_to_original(const PolynomialMap& phi, const EigenSystem& E) {
  const int n = phi.n;
  if (E.n() != n) throw DimensionMismatch("eigensystem dimension does not match the map");

  // x -> V phi(L x), truncated at the map's degree.
  CField lx(n, CPoly(n));
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j) {
      if (E.left(s, j) == Complex(0, 0)) continue;
      MultiIndex m(n, 0);
      m[j] = 1;
      lx[s].add(m, E.left(s, j));
    }
  CField phi_of_lx = substitute_all(phi.components, lx, phi.degree);

  PolynomialMap out;
  out.n = n;
  out.degree = phi.degree;
  out.components.assign(n, CPoly(n));
  for (int r = 0; r < n; ++r) {
    CPoly acc(n);
    for (int s = 0; s < n; ++s) {
      CPoly t = phi_of_lx[s];
      t *= E.right(r, s);
      acc += t;
    }
    acc.prune(1e-14 * std::max(1.0, acc.max_abs_coeff()));
    out.components[r] = std::move(acc);
  }
  return out;
}

ParticipationMatrix mode_in_state_nonlinear(const VectorField<double>& f, const EigenSystem& E,
                                            const NormalFormTransform& nf) {
  if (f.n != E.n()) throw DimensionMismatch("field dimension does not match the eigensystem");

  bool resonant_within_order = false;
  for (const auto& comp : nf.w.components)
    if (!comp.empty()) resonant_within_order = true;
  const RegimeReport rr =
      regime(E.eigenvalues, std::max(10, nf.truncation_order), -1.0, 1.0);

  ParticipationMatrix P;
  if (!rr.resonances.resonant() && !resonant_within_order) {
    P = classic_pf(E);
    P.note = "nonlinear mode-in-state equals the linear factors (" +
             theorem_name(rr.applicable_theorem == Theorem::PoincareSiegel
                              ? Theorem::PoincareSiegel
                              : Theorem::Poincare) +
             ")";
  } else if (rr.hyperbolic) {
    P = classic_pf(E);
    P.note = "nonlinear mode-in-state equals the linear factors (HartmanGrobman)";
  } else {
    throw RegimeNotEstablished(
        "neither nonresonance nor hyperbolicity holds; the nonlinear participation value "
        "is not asserted");
  }
  return P;
}

}  // namespace mpa
