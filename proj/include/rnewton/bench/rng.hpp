// Seeded random streams for reproducible instances: SplitMix64 uniforms and
// Box-Muller normals.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace rnewton::bench {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal. Deviates come in Box-Muller pairs; the second one is
  /// cached for the next call.
  double normal();

  /// rows x cols matrix of normals, filled column by column.
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);
  Eigen::VectorXd normal_vector(Eigen::Index n);

private:
  std::uint64_t state_;
  std::optional<double> cached_;
};

/// Standard normal deviate from an explicit generator; equivalent to rng.normal().
inline double rng_normal(Rng &rng) { return rng.normal(); }

} // namespace rnewton::bench
