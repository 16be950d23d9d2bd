#include "rnewton/bench/generators.hpp"

#include "rnewton/bench/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace rnewton::bench {

namespace {

// Separate streams for the matrix data and the starting point of an instance.
constexpr std::uint64_t kStartStream = 0xD1B54A32D192ED03ULL;

Vec random_unit(Rng &rng, Index n) {
  Vec v = rng.normal_vector(n);
  return v / v.norm();
}

Mat poisson2d(Index k) {
  const Index n = k * k;
  Mat A = Mat::Zero(n, n);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      const Index r = i * k + j;
      A(r, r) = 4.0;
      if (j + 1 < k)
        A(r, r + 1) = A(r + 1, r) = -1.0;
      if (i + 1 < k)
        A(r, r + k) = A(r + k, r) = -1.0;
    }
  return A;
}

} // namespace

SphereNcInstance gen_sphere_nc(Index n, std::uint64_t seed) {
  if (n < 2)
    throw std::invalid_argument("gen_sphere_nc needs n >= 2");
  Rng rng(seed);
  const Mat A = rng.normal_matrix(n + 1, n + 1);
  SphereNcInstance out;
  out.problem.Q = A - A.transpose();
  out.problem.pbar = random_unit(rng, n + 1);
  out.p0 = Point{ManifoldTag::Sphere, random_unit(rng, n + 1), 0};
  return out;
}

Mat gen_spd_matrix(int family, Index n, std::uint64_t seed) {
  if (n < 2)
    throw std::invalid_argument("gen_spd_matrix needs n >= 2");
  switch (family) {
  case 1: {
    const auto k = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n)))) + 1;
    return poisson2d(k);
  }
  case 2:
    return Mat::Ones(n, n) + 2.0 * static_cast<double>(n) * Mat::Identity(n, n);
  case 3: {
    Mat A = 10.0 * Mat::Identity(n, n);
    for (Index i = 0; i + 1 < n; ++i)
      A(i, i + 1) = A(i + 1, i) = 1.0;
    return A;
  }
  case 4: {
    Rng rng(seed);
    Mat A = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      A(i, i) = rng.uniform();
    A(0, n - 1) = A(n - 1, 0) = 1.0;
    return A;
  }
  case 5: {
    Rng rng(seed);
    const auto Q = stiefel::qf(rng.normal_matrix(n, n));
    if (!Q)
      throw std::runtime_error("gen_spd_matrix: degenerate random orthogonal factor");
    Vec lam(n);
    for (Index i = 0; i < n; ++i)
      lam(i) = std::pow(10.0, -1.0 + static_cast<double>(i) / static_cast<double>(n - 1));
    Mat A = *Q * lam.asDiagonal() * Q->transpose();
    return 0.5 * (A + A.transpose());
  }
  default:
    throw std::invalid_argument("matrix family must be in 1..5");
  }
}

RayleighInstance gen_rayleigh(int family, Index n, std::uint64_t seed) {
  RayleighInstance out;
  out.problem.A = gen_spd_matrix(family, n, seed);
  Rng rng(seed ^ kStartStream);
  out.p0 = Point{ManifoldTag::Sphere, random_unit(rng, out.problem.A.rows()), 0};
  return out;
}

SpdStart gen_spd_start(int family, Index n, std::uint64_t seed) {
  SpdStart out{gen_spd_matrix(family, n, seed), 0.0};
  Eigen::LLT<Mat> llt(out.P0);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> es(out.P0, Eigen::EigenvaluesOnly);
    out.shift = 1.0 + std::abs(es.eigenvalues()(0));
    out.P0 += out.shift * Mat::Identity(out.P0.rows(), out.P0.cols());
  }
  return out;
}

TsvdInstance gen_tsvd(Index m, Index n, Index p, std::uint64_t seed, double epsilon) {
  if (!(p >= 1 && p <= n && n <= m))
    throw std::invalid_argument("gen_tsvd needs p <= n <= m");
  Rng rng(seed);
  auto Ps = stiefel::qf(rng.normal_matrix(m, p));
  auto Qs = stiefel::qf(rng.normal_matrix(n, p));
  if (!Ps || !Qs)
    throw std::runtime_error("gen_tsvd: degenerate random factor");
  TsvdInstance out;
  out.problem.mu.resize(p);
  for (Index i = 0; i < p; ++i)
    out.problem.mu(i) = static_cast<double>(p - i);
  out.problem.A = *Ps * out.problem.mu.asDiagonal() * Qs->transpose();
  out.solution = {*Ps, *Qs};

  Rng start(seed ^ kStartStream);
  const Mat G1 = start.normal_matrix(m, p);
  const Mat G2 = start.normal_matrix(n, p);
  auto P0 = stiefel::qf(*Ps + epsilon * G1);
  auto Q0 = stiefel::qf(*Qs + epsilon * G2);
  if (!P0 || !Q0)
    throw std::runtime_error("gen_tsvd: degenerate initial guess");
  out.x0 = stiefel::point(*P0, *Q0);
  return out;
}

} // namespace rnewton::bench
