#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "mpa/eigensystem.hpp"
#include "mpa/sampling.hpp"

namespace mpa {

/// n x n grid of participation values, indexed (k = state, i = mode).
struct ParticipationMatrix {
  enum class Kind { ModeInState, StateInMode };
  enum class Method { ClassicFormula, ClosedFormSymmetric, MonteCarlo };

  Eigen::MatrixXcd values;
  Kind kind = Kind::ModeInState;
  Method method = Method::ClassicFormula;
  std::optional<Eigen::MatrixXd> stderr_re;  // Monte-Carlo only
  std::optional<Eigen::MatrixXd> stderr_im;
  std::string note;  // provenance: model, theorem invoked, sample count

  int n() const { return static_cast<int>(values.rows()); }
};

struct McOptions {
  double clip_tol = 1e-6;  // denominators below clip_tol * scale are discarded
  int workers = 1;
};

/// Classic mode-in-state participation factors p_ki = l_k^i r_k^i.
ParticipationMatrix classic_pf(const EigenSystem& E);

/// Same values as classic_pf; valid as the averaged definition whenever the
/// initial-condition uncertainty is symmetric in each coordinate.
ParticipationMatrix mode_in_state_symmetric(const EigenSystem& E);

/// Closed-form state-in-mode participation under a uniform initial
/// condition on a sphere:
///   pi_ki = l_k^i r_k^i + sum_{j != i} l_k^i r_k^j (l^j (l^i)^T)/(l^i (l^i)^T).
ParticipationMatrix state_in_mode_closed(const EigenSystem& E);

/// Monte-Carlo estimate of E[(l^i x0) r_k^i / x0_k]. With an antithetic
/// stream the sign-flip orbit makes every odd cross term cancel inside the
/// sample multiset, so the estimate matches the closed form to rounding;
/// the reported stderr still reflects the spread of (x, -x) pair means.
ParticipationMatrix mode_in_state_mc(const EigenSystem& E, const InitialConditionModel& icm,
                                     const SampleStream& s, const McOptions& opts = {});

/// Monte-Carlo estimate of E[l_k^i x0_k / z_i0] for the uniform sphere.
/// Each draw is paired with its reflection across the hyperplane where the
/// modal coordinate z_i vanishes; pair averaging removes the 1/z_i
/// singularity.
ParticipationMatrix state_in_mode_mc(const EigenSystem& E, const InitialConditionModel& icm,
                                     const SampleStream& s, const McOptions& opts = {});

/// Conjugate-pair-summed real presentation: columns of a conjugate mode
/// pair are added (giving 2 Re of the pair member), other columns pass
/// through as their real part. mode_labels describes the merged columns.
struct PairSummedView {
  Eigen::MatrixXd values;
  std::vector<std::string> mode_labels;
};
PairSummedView pair_sum_modes(const Eigen::MatrixXcd& values, const Eigen::VectorXcd& lambdas);

}  // namespace mpa
