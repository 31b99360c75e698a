#include "mpa/participation.hpp"

#include <cmath>
#include <vector>

#include "mc_detail.hpp"

namespace mpa {

ParticipationMatrix classic_pf(const EigenSystem& E) {
  const int n = E.n();
  ParticipationMatrix P;
  P.values.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) P.values(k, i) = E.left(i, k) * E.right(k, i);
  P.kind = ParticipationMatrix::Kind::ModeInState;
  P.method = ParticipationMatrix::Method::ClassicFormula;
  return P;
}

ParticipationMatrix mode_in_state_symmetric(const EigenSystem& E) {
  ParticipationMatrix P = classic_pf(E);
  P.method = ParticipationMatrix::Method::ClosedFormSymmetric;
  P.note = "symmetric initial-condition model assumed";
  return P;
}

ParticipationMatrix state_in_mode_closed(const EigenSystem& E) {
  const int n = E.n();
  // Unconjugated bilinear products l^j (l^i)^T.
  Eigen::MatrixXcd G(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) G(j, i) = E.left.row(j) * E.left.row(i).transpose();

  for (int i = 0; i < n; ++i) {
    const double scale = E.left.row(i).norm();
    if (std::abs(G(i, i)) <= 1e-14 * scale * scale)
      throw ZeroLeftEigenvector("l^i (l^i)^T vanishes for mode " + std::to_string(i + 1) +
                                "; the sphere average is not defined for this basis");
  }

  ParticipationMatrix P;
  P.values.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      Complex v = E.left(i, k) * E.right(k, i);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        v += E.left(i, k) * E.right(k, j) * (G(j, i) / G(i, i));
      }
      P.values(k, i) = v;
    }
  P.kind = ParticipationMatrix::Kind::StateInMode;
  P.method = ParticipationMatrix::Method::ClosedFormSymmetric;
  P.note = "uniform sphere";
  return P;
}

ParticipationMatrix mode_in_state_mc(const EigenSystem& E, const InitialConditionModel& icm,
                                     const SampleStream& s, const McOptions& opts) {
  const int n = E.n();
  if (icm.dimension != n)
    throw DimensionMismatch("initial-condition model dimension does not match the system");
  if (s.count < 1000) throw InvalidArgument("mode-in-state estimate needs at least 1000 samples");

  const auto samples = sample(icm, s);
  const std::int64_t stride = s.antithetic ? 2 : 1;
  const std::int64_t total_pairs = static_cast<std::int64_t>(samples.size()) / stride;
  const Eigen::VectorXd clip = opts.clip_tol * icm.per_axis_scale();

  detail::McAccum acc = detail::run_blocks(
      n, total_pairs, opts.workers, [&](detail::McAccum& a, std::int64_t first, std::int64_t last) {
        Eigen::VectorXcd z(n);
        for (std::int64_t p = first; p < last; ++p) {
          const Eigen::VectorXd& x = samples[static_cast<std::size_t>(p * stride)];
          z.noalias() = E.left * x.cast<Complex>();
          for (int k = 0; k < n; ++k) {
            if (std::abs(x[k]) < clip[k]) {
              a.clipped[k] += 1;
              continue;
            }
            a.pairs[k] += 1;
            for (int i = 0; i < n; ++i) a.deposit(k, i, z[i] * E.right(k, i) / x[k]);
          }
        }
      });

  detail::mc_check_degenerate(acc, "state");

  ParticipationMatrix P;
  P.kind = ParticipationMatrix::Kind::ModeInState;
  P.method = ParticipationMatrix::Method::MonteCarlo;
  P.stderr_re.emplace();
  P.stderr_im.emplace();
  detail::mc_finalize(acc, n, [](int k, int) { return k; }, P.values, *P.stderr_re, *P.stderr_im);
  P.note = "samples=" + std::to_string(samples.size()) +
           (s.antithetic ? " antithetic" : " independent");
  return P;
}

ParticipationMatrix state_in_mode_mc(const EigenSystem& E, const InitialConditionModel& icm,
                                     const SampleStream& s, const McOptions& opts) {
  const int n = E.n();
  if (icm.dimension != n)
    throw DimensionMismatch("initial-condition model dimension does not match the system");
  if (icm.kind != InitialConditionModel::Kind::UniformSphere)
    throw InvalidArgument("state-in-mode estimation is defined for the uniform sphere model");
  if (s.count < 1000) throw InvalidArgument("state-in-mode estimate needs at least 1000 samples");

  // Reflector per mode: flips the sign of z_i = l^i x while preserving the
  // sphere. For a complex mode the reflection is across the codimension-2
  // set {Re(l^i) x = Im(l^i) x = 0}.
  std::vector<Eigen::MatrixXd> reflect(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd basis(n, 2);
    int cols = 0;
    Eigen::VectorXd u1 = E.left.row(i).real().transpose();
    Eigen::VectorXd u2 = E.left.row(i).imag().transpose();
    if (u1.norm() > 1e-14) basis.col(cols++) = u1 / u1.norm();
    if (cols == 1) u2 -= basis.col(0).dot(u2) * basis.col(0);
    if (u2.norm() > 1e-10 * E.left.row(i).norm()) basis.col(cols++) = u2 / u2.norm();
    if (cols == 0)
      throw ZeroLeftEigenvector("left eigenvector " + std::to_string(i + 1) + " vanishes");
    const Eigen::MatrixXd Q = basis.leftCols(cols);
    reflect[i] = Eigen::MatrixXd::Identity(n, n) - 2.0 * Q * Q.transpose();
  }

  const auto samples = sample(icm, s);
  const std::int64_t stride = s.antithetic ? 2 : 1;
  const std::int64_t total_pairs = static_cast<std::int64_t>(samples.size()) / stride;
  Eigen::VectorXd clip(n);
  for (int i = 0; i < n; ++i) clip[i] = opts.clip_tol * E.left.row(i).norm() * icm.radius;

  detail::McAccum acc = detail::run_blocks(
      n, total_pairs, opts.workers, [&](detail::McAccum& a, std::int64_t first, std::int64_t last) {
        Eigen::VectorXcd z(n);
        Eigen::VectorXd xr(n);
        for (std::int64_t p = first; p < last; ++p) {
          const Eigen::VectorXd& x = samples[static_cast<std::size_t>(p * stride)];
          z.noalias() = E.left * x.cast<Complex>();
          for (int i = 0; i < n; ++i) {
            if (std::abs(z[i]) < clip[i]) {
              a.clipped[i] += 1;
              continue;
            }
            a.pairs[i] += 1;
            xr.noalias() = reflect[i] * x;
            const Complex zi_r = E.left.row(i) * xr.cast<Complex>();
            for (int k = 0; k < n; ++k)
              a.deposit(k, i,
                        0.5 * (E.left(i, k) * x[k] / z[i] + E.left(i, k) * xr[k] / zi_r));
          }
        }
      });

  detail::mc_check_degenerate(acc, "mode");

  ParticipationMatrix P;
  P.kind = ParticipationMatrix::Kind::StateInMode;
  P.method = ParticipationMatrix::Method::MonteCarlo;
  P.stderr_re.emplace();
  P.stderr_im.emplace();
  detail::mc_finalize(acc, n, [](int, int i) { return i; }, P.values, *P.stderr_re, *P.stderr_im);
  P.note = "samples=" + std::to_string(samples.size()) +
           (s.antithetic ? " antithetic" : " independent");
  return P;
}

PairSummedView pair_sum_modes(const Eigen::MatrixXcd& values, const Eigen::VectorXcd& lambdas) {
  const int n = static_cast<int>(values.rows());
  PairSummedView view;
  std::vector<int> starts;
  std::vector<bool> merged;
  for (int i = 0; i < n; ++i) {
    starts.push_back(i);
    const bool pair = i + 1 < n && lambdas[i].imag() > 0.0 &&
                      lambdas[i + 1] == std::conj(lambdas[i]);
    merged.push_back(pair);
    if (pair) ++i;
  }
  view.values.resize(n, static_cast<int>(starts.size()));
  for (std::size_t c = 0; c < starts.size(); ++c) {
    const int i = starts[c];
    Eigen::VectorXcd col = values.col(i);
    if (merged[c]) {
      col += values.col(i + 1);
      view.mode_labels.push_back(std::to_string(i + 1) + "+" + std::to_string(i + 2));
    } else {
      view.mode_labels.push_back(std::to_string(i + 1));
    }
    view.values.col(static_cast<int>(c)) = col.real();
  }
  return view;
}

}  // namespace mpa
