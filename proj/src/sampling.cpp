#include "mpa/sampling.hpp"

#include <cmath>
#include <numbers>

namespace mpa {

InitialConditionModel InitialConditionModel::uniform_sphere(int n, double radius) {
  InitialConditionModel icm;
  icm.kind = Kind::UniformSphere;
  icm.dimension = n;
  icm.radius = radius;
  icm.validate();
  return icm;
}

InitialConditionModel InitialConditionModel::symmetric_product(int n, Marginal m, double param) {
  InitialConditionModel icm;
  icm.kind = Kind::SymmetricProduct;
  icm.dimension = n;
  icm.marginal = m;
  icm.marginal_param = param;
  icm.validate();
  return icm;
}

InitialConditionModel InitialConditionModel::symmetric_set(SetShape shape,
                                                           const Eigen::VectorXd& semi_axes) {
  InitialConditionModel icm;
  icm.kind = Kind::SymmetricSet;
  icm.dimension = static_cast<int>(semi_axes.size());
  icm.shape = shape;
  icm.semi_axes = semi_axes;
  icm.validate();
  return icm;
}

Eigen::VectorXd InitialConditionModel::per_axis_scale() const {
  switch (kind) {
    case Kind::UniformSphere:
      return Eigen::VectorXd::Constant(dimension, radius);
    case Kind::SymmetricProduct:
      return Eigen::VectorXd::Constant(dimension, marginal_param);
    case Kind::SymmetricSet:
      return semi_axes;
  }
  throw InvalidArgument("unknown initial-condition model kind");
}

void InitialConditionModel::validate() const {
  if (dimension <= 0) throw InvalidArgument("initial-condition model needs dimension >= 1");
  switch (kind) {
    case Kind::UniformSphere:
      if (!(radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
      break;
    case Kind::SymmetricProduct:
      if (!(marginal_param > 0.0)) throw InvalidArgument("marginal parameter must be positive");
      break;
    case Kind::SymmetricSet:
      if (semi_axes.size() != dimension)
        throw DimensionMismatch("semi-axis vector length does not match dimension");
      if (!(semi_axes.minCoeff() > 0.0))
        throw InvalidArgument("set semi-axes must be positive");
      break;
  }
}

std::int64_t orbit_size(const InitialConditionModel& icm, const SampleStream& s) {
  if (!s.antithetic) return 1;
  if (icm.dimension > 20)
    throw InvalidArgument("antithetic orbit emission limited to dimension <= 20");
  return std::int64_t{1} << icm.dimension;
}

namespace detail {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t block) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (block + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BaseDrawGenerator::BaseDrawGenerator(const InitialConditionModel& icm, std::uint64_t seed,
                                     std::int64_t block_index)
    : icm_(icm), state_(mix_seed(seed, static_cast<std::uint64_t>(block_index))) {
  if (state_ == 0) state_ = 0x6a09e667f3bcc909ULL;
}

double BaseDrawGenerator::uniform01() {
  // xorshift64*; top 53 bits give a double in [0, 1)
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  const std::uint64_t bits = state_ * 0x2545f4914f6cdd1dULL;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double BaseDrawGenerator::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1eps;
  do {
    u1eps = uniform01();
  } while (u1eps <= 0.0);
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1eps));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd BaseDrawGenerator::next() {
  const int n = icm_.dimension;
  Eigen::VectorXd x(n);
  switch (icm_.kind) {
    case InitialConditionModel::Kind::UniformSphere: {
      double norm2;
      do {
        for (int j = 0; j < n; ++j) x[j] = gaussian();
        norm2 = x.squaredNorm();
      } while (norm2 == 0.0);
      x *= icm_.radius / std::sqrt(norm2);
      return x;
    }
    case InitialConditionModel::Kind::SymmetricProduct: {
      for (int j = 0; j < n; ++j) {
        switch (icm_.marginal) {
          case InitialConditionModel::Marginal::Uniform:
            x[j] = (2.0 * uniform01() - 1.0) * icm_.marginal_param;
            break;
          case InitialConditionModel::Marginal::Gaussian:
            x[j] = gaussian() * icm_.marginal_param;
            break;
          case InitialConditionModel::Marginal::Rademacher:
            x[j] = (uniform01() < 0.5 ? -1.0 : 1.0) * icm_.marginal_param;
            break;
        }
      }
      return x;
    }
    case InitialConditionModel::Kind::SymmetricSet: {
      if (icm_.shape == InitialConditionModel::SetShape::Box) {
        for (int j = 0; j < n; ++j)
          x[j] = (2.0 * uniform01() - 1.0) * icm_.semi_axes[j];
        return x;
      }
      // Uniform in the ellipsoid: direction from a gaussian, radius from
      // the n-th root law, then scale per axis.
      double norm2;
      do {
        for (int j = 0; j < n; ++j) x[j] = gaussian();
        norm2 = x.squaredNorm();
      } while (norm2 == 0.0);
      const double r = std::pow(uniform01(), 1.0 / n);
      x *= r / std::sqrt(norm2);
      return x.cwiseProduct(icm_.semi_axes);
    }
  }
  throw InvalidArgument("unknown initial-condition model kind");
}

}  // namespace detail

std::vector<Eigen::VectorXd> sample(const InitialConditionModel& icm, const SampleStream& s) {
  icm.validate();
  if (s.count <= 0) throw InvalidArgument("sample count must be positive");

  const std::int64_t orbit = orbit_size(icm, s);
  const std::int64_t base_draws = (s.count + orbit - 1) / orbit;
  const int n = icm.dimension;

  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(base_draws * orbit));

  constexpr std::int64_t kBlockDraws = 4096;
  detail::BaseDrawGenerator gen(icm, s.seed, 0);
  std::int64_t in_block = 0, block = 0;
  for (std::int64_t d = 0; d < base_draws; ++d) {
    if (in_block == kBlockDraws) {
      gen = detail::BaseDrawGenerator(icm, s.seed, ++block);
      in_block = 0;
    }
    ++in_block;
    const Eigen::VectorXd y = gen.next();
    if (!s.antithetic) {
      out.push_back(y);
      continue;
    }
    // Emit the sign-flip orbit as consecutive (x, -x) pairs: the first
    // coordinate's sign alternates within a pair, the mask drives the rest.
    for (std::int64_t mask = 0; mask < orbit / 2; ++mask) {
      Eigen::VectorXd x = y;
      for (int j = 1; j < n; ++j)
        if ((mask >> (j - 1)) & 1) x[j] = -x[j];
      out.push_back(x);
      out.push_back(-x);
    }
  }
  return out;
}

}  // namespace mpa
