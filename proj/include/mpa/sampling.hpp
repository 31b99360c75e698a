#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mpa/errors.hpp"

namespace mpa {

/// Symmetric uncertainty model for the system initial condition. Every
/// variant is invariant under a sign flip of each coordinate, which is the
/// symmetry assumption the closed-form participation results rest on.
struct InitialConditionModel {
  enum class Kind { UniformSphere, SymmetricProduct, SymmetricSet };
  enum class Marginal { Uniform, Gaussian, Rademacher };
  enum class SetShape { Box, Ellipsoid };

  Kind kind = Kind::UniformSphere;
  int dimension = 0;
  double radius = 1.0;                  // UniformSphere
  Marginal marginal = Marginal::Uniform;  // SymmetricProduct
  double marginal_param = 1.0;            // half-width a or std dev sigma
  SetShape shape = SetShape::Box;          // SymmetricSet
  Eigen::VectorXd semi_axes;               // per-axis half-widths / semi-axes

  static InitialConditionModel uniform_sphere(int n, double radius = 1.0);
  static InitialConditionModel symmetric_product(int n, Marginal m, double param);
  static InitialConditionModel symmetric_set(SetShape shape, const Eigen::VectorXd& semi_axes);

  /// Per-axis magnitude scale, used for denominator clipping thresholds.
  Eigen::VectorXd per_axis_scale() const;

  void validate() const;
};

/// Deterministic sample-stream description. With antithetic=true the stream
/// emits, for every base draw, its full orbit under per-coordinate sign
/// flips (2^n points, consecutive entries forming (x, -x) pairs), so the
/// empirical measure satisfies the model's symmetry law exactly. The emitted
/// count is `count` rounded up to a whole number of orbits.
struct SampleStream {
  std::uint64_t seed = 0;
  std::int64_t count = 0;
  bool antithetic = true;
};

/// Number of points per antithetic orbit (2^n, or 1 when not antithetic).
std::int64_t orbit_size(const InitialConditionModel& icm, const SampleStream& s);

/// Materialized sample sequence; deterministic in (model, seed, count).
std::vector<Eigen::VectorXd> sample(const InitialConditionModel& icm, const SampleStream& s);

namespace detail {

/// splitmix64; used to derive independent per-block RNG seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t block);

/// Base draws are produced in fixed-size blocks so that estimators can be
/// parallelized over blocks and reduced in block order, making results
/// independent of the worker count. Block `b` holds base draws
/// [b*block, min((b+1)*block, total)).
class BaseDrawGenerator {
 public:
  BaseDrawGenerator(const InitialConditionModel& icm, std::uint64_t seed,
                    std::int64_t block_index);

  Eigen::VectorXd next();

 private:
  double uniform01();  // in [0, 1)
  double gaussian();

  const InitialConditionModel& icm_;
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

}  // namespace mpa
