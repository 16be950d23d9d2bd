// Deterministic instance generators for the benchmark suites.

#pragma once

#include "rnewton/core.hpp"
#include "rnewton/sphere.hpp"
#include "rnewton/stiefel.hpp"

#include <cstdint>

namespace rnewton::bench {

struct SphereNcInstance {
  sphere::NonconservativeProblem problem;
  Point p0;
};

/// Q = A - A^T with A Gaussian of order n+1; pbar and p0 independent
/// normalized Gaussian vectors.
SphereNcInstance gen_sphere_nc(Index n, std::uint64_t seed);

/// Symmetric test matrices, numbered as in the Rayleigh experiments:
///  1. 2-D Dirichlet Laplacian on a k x k grid, k = ceil(sqrt(n)) + 1 (order k^2)
///  2. ones(n, n) + 2n I
///  3. tridiag(1, 10, 1)
///  4. diag(uniform(0,1)) with A(1,n) = A(n,1) = 1 (may be indefinite)
///  5. Q diag(logspace(-1, 0, n)) Q^T with a random orthogonal Q
/// Families 1-3 ignore the seed.
Mat gen_spd_matrix(int family, Index n, std::uint64_t seed);

struct RayleighInstance {
  sphere::RayleighProblem problem;
  Point p0;
};

/// A from gen_spd_matrix and a uniformly random starting point.
RayleighInstance gen_rayleigh(int family, Index n, std::uint64_t seed);

struct SpdStart {
  Mat P0;
  double shift = 0.0; // (1 + |lambda_min|) when the raw matrix was not SPD
};

/// gen_spd_matrix, shifted by (1 + |lambda_min|) I if it fails Cholesky.
SpdStart gen_spd_start(int family, Index n, std::uint64_t seed);

struct TsvdInstance {
  stiefel::TsvdProblem problem;
  Point x0;
  stiefel::ProductPoint solution;
};

/// A = P* N Q*^T with N = diag(p, ..., 1), P*, Q* the qf factors of Gaussian
/// matrices; x0 = (qf(P* + eps G1), qf(Q* + eps G2)).
TsvdInstance gen_tsvd(Index m, Index n, Index p, std::uint64_t seed, double epsilon);

} // namespace rnewton::bench
