#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "mpa/errors.hpp"

namespace mpa {

/// Exponent vector (m_1, ..., m_n) of a monomial x_1^{m_1} ... x_n^{m_n}.
using MultiIndex = std::vector<int>;

inline int index_order(const MultiIndex& m) {
  int s = 0;
  for (int e : m) s += e;
  return s;
}

namespace detail {
inline double coeff_abs(double c) { return std::abs(c); }
inline double coeff_abs(const std::complex<double>& c) { return std::abs(c); }
}  // namespace detail

/// Sparse multivariate polynomial: exponent vector -> coefficient. Zero
/// coefficients are never stored, so iteration order (lexicographic in the
/// exponents) and arithmetic results are deterministic.
template <typename Scalar>
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Scalar>;

  Polynomial() = default;
  explicit Polynomial(int vars) : vars_(vars) {}

  int vars() const { return vars_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }

  Scalar coeff(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void set(const MultiIndex& m, Scalar c) {
    check_index(m);
    if (c == Scalar(0))
      terms_.erase(m);
    else
      terms_[m] = c;
  }

  void add(const MultiIndex& m, Scalar c) {
    check_index(m);
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, index_order(m));
    return d;
  }

  int min_degree() const {
    int d = std::numeric_limits<int>::max();
    for (const auto& [m, c] : terms_) d = std::min(d, index_order(m));
    return terms_.empty() ? 0 : d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }

  Polynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }

  /// Keep only terms with total order <= max_order.
  Polynomial truncated(int max_order) const {
    Polynomial out(vars_);
    for (const auto& [m, c] : terms_)
      if (index_order(m) <= max_order) out.terms_.emplace(m, c);
    return out;
  }

  /// Drop terms with |coefficient| <= eps.
  void prune(double eps) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (detail::coeff_abs(it->second) <= eps)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  double max_abs_coeff() const {
    double a = 0.0;
    for (const auto& [m, c] : terms_) a = std::max(a, detail::coeff_abs(c));
    return a;
  }

  bool all_finite() const {
    for (const auto& [m, c] : terms_)
      if (!std::isfinite(detail::coeff_abs(c))) return false;
    return true;
  }

  template <typename S2>
  Polynomial<S2> cast() const {
    Polynomial<S2> out(vars_);
    for (const auto& [m, c] : terms_) out.set(m, S2(c));
    return out;
  }

  /// d/dx_j.
  Polynomial partial(int j) const {
    Polynomial out(vars_);
    for (const auto& [m, c] : terms_) {
      if (m[j] == 0) continue;
      MultiIndex d = m;
      d[j] -= 1;
      out.add(d, c * Scalar(m[j]));
    }
    return out;
  }

  template <typename PointScalar>
  auto evaluate(const Eigen::Matrix<PointScalar, Eigen::Dynamic, 1>& x) const
      -> decltype(std::declval<Scalar>() * std::declval<PointScalar>()) {
    using R = decltype(std::declval<Scalar>() * std::declval<PointScalar>());
    if (x.size() != vars_) throw DimensionMismatch("evaluation point has wrong dimension");
    R acc(0);
    for (const auto& [m, c] : terms_) {
      PointScalar mono(1);
      for (int j = 0; j < vars_; ++j)
        for (int e = 0; e < m[j]; ++e) mono *= x[j];
      acc += c * mono;
    }
    return acc;
  }

 private:
  void check_index(const MultiIndex& m) const {
    if (static_cast<int>(m.size()) != vars_)
      throw DimensionMismatch("multi-index length does not match variable count");
    for (int e : m)
      if (e < 0) throw InvalidArgument("negative exponent in multi-index");
  }

  int vars_ = 0;
  Terms terms_;
};

/// Product truncated at total order `trunc`; cross terms beyond it are
/// never formed.
template <typename Scalar>
Polynomial<Scalar> multiply(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b,
                            int trunc = std::numeric_limits<int>::max()) {
  Polynomial<Scalar> out(a.vars());
  if (a.vars() != b.vars()) throw DimensionMismatch("polynomial variable counts differ");
  for (const auto& [ma, ca] : a.terms()) {
    const int oa = index_order(ma);
    if (oa > trunc) continue;
    for (const auto& [mb, cb] : b.terms()) {
      if (oa + index_order(mb) > trunc) continue;
      MultiIndex m(ma.size());
      for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
      out.add(m, ca * cb);
    }
  }
  return out;
}

template <typename Scalar>
Polynomial<Scalar> pow_truncated(const Polynomial<Scalar>& p, int e, int trunc) {
  Polynomial<Scalar> out(p.vars());
  out.set(MultiIndex(p.vars(), 0), Scalar(1));
  for (int k = 0; k < e; ++k) out = multiply(out, p, trunc);
  return out;
}

/// p(g_1(x), ..., g_n(x)) truncated at total order `trunc`.
template <typename Scalar>
Polynomial<Scalar> substitute(const Polynomial<Scalar>& p,
                              const std::vector<Polynomial<Scalar>>& args, int trunc) {
  if (static_cast<int>(args.size()) != p.vars())
    throw DimensionMismatch("substitution needs one polynomial per variable");
  const int nv = args.empty() ? 0 : args.front().vars();
  Polynomial<Scalar> out(nv);
  for (const auto& [m, c] : p.terms()) {
    Polynomial<Scalar> mono(nv);
    mono.set(MultiIndex(nv, 0), c);
    for (int j = 0; j < p.vars() && !mono.empty(); ++j)
      if (m[j] > 0) mono = multiply(mono, pow_truncated(args[j], m[j], trunc), trunc);
    out += mono;
  }
  return out;
}

/// Truncated analytic vector field with equilibrium at the origin:
/// component s holds the terms of dx_s/dt for 1 <= |m| <= degree.
template <typename Scalar>
struct VectorField {
  int n = 0;
  int degree = 1;
  std::vector<Polynomial<Scalar>> components;

  VectorField() = default;
  VectorField(int n_, int degree_)
      : n(n_), degree(degree_), components(n_, Polynomial<Scalar>(n_)) {}

  static VectorField from_linear(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                                 int degree_ = 1) {
    VectorField f(static_cast<int>(A.rows()), degree_);
    for (int s = 0; s < f.n; ++s)
      for (int j = 0; j < f.n; ++j)
        if (A(s, j) != Scalar(0)) {
          MultiIndex m(f.n, 0);
          m[j] = 1;
          f.components[s].set(m, A(s, j));
        }
    return f;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> linear_part() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (int s = 0; s < n; ++s)
      for (const auto& [m, c] : components[s].terms())
        if (index_order(m) == 1)
          for (int j = 0; j < n; ++j)
            if (m[j] == 1) A(s, j) = c;
    return A;
  }

  template <typename PointScalar>
  auto evaluate(const Eigen::Matrix<PointScalar, Eigen::Dynamic, 1>& x) const {
    using R = decltype(std::declval<Scalar>() * std::declval<PointScalar>());
    Eigen::Matrix<R, Eigen::Dynamic, 1> out(n);
    for (int s = 0; s < n; ++s) out[s] = components[s].evaluate(x);
    return out;
  }

  std::size_t term_count() const {
    std::size_t t = 0;
    for (const auto& p : components) t += p.term_count();
    return t;
  }

  /// Throws on constant terms (f(0) != 0), non-finite coefficients, or
  /// components of mismatched dimension.
  void validate() const {
    if (static_cast<int>(components.size()) != n)
      throw DimensionMismatch("vector field needs one component per state");
    for (const auto& p : components) {
      if (p.vars() != n) throw DimensionMismatch("component polynomial has wrong variable count");
      if (!p.all_finite()) throw InvalidArgument("vector field has non-finite coefficients");
      if (p.coeff(MultiIndex(n, 0)) != Scalar(0))
        throw InvalidArgument("vector field has a constant term; the origin must be an equilibrium");
    }
  }
};

/// Polynomial change of coordinates y -> y + (terms of degree >= 2). The
/// linear part is always the identity.
struct PolynomialMap {
  int n = 0;
  int degree = 1;
  std::vector<Polynomial<std::complex<double>>> components;

  PolynomialMap() = default;

  static PolynomialMap identity(int n_, int degree_ = 1) {
    PolynomialMap phi;
    phi.n = n_;
    phi.degree = degree_;
    phi.components.assign(n_, Polynomial<std::complex<double>>(n_));
    for (int s = 0; s < n_; ++s) {
      MultiIndex m(n_, 0);
      m[s] = 1;
      phi.components[s].set(m, std::complex<double>(1, 0));
    }
    return phi;
  }

  void validate() const {
    if (static_cast<int>(components.size()) != n)
      throw DimensionMismatch("map needs one component per variable");
    for (int s = 0; s < n; ++s) {
      const auto& p = components[s];
      if (p.coeff(MultiIndex(n, 0)) != std::complex<double>(0))
        throw InvalidArgument("coordinate map has a constant term");
      for (int j = 0; j < n; ++j) {
        MultiIndex m(n, 0);
        m[j] = 1;
        const auto c = p.coeff(m);
        const auto want = (j == s) ? std::complex<double>(1, 0) : std::complex<double>(0, 0);
        if (std::abs(c - want) > 1e-12)
          throw InvalidArgument("coordinate map linear part is not the identity");
      }
    }
  }
};

}  // namespace mpa
