// Random instances of the five problem families at random base points, for
// property tests that must hold across every field.

#pragma once

#include "oracles.hpp"

#include "rnewton/core.hpp"
#include "rnewton/spd.hpp"
#include "rnewton/sphere.hpp"
#include "rnewton/stiefel.hpp"

#include <string>
#include <vector>

namespace oracle {

struct FamilyCase {
  std::string name;
  rnewton::FieldProblem problem;
  rnewton::Point point;
  rnewton::RetractionKind retraction;
};

inline rnewton::FieldProblem random_nc(Probe &probe, Index n) {
  const Mat B = probe.matrix(n + 1, n + 1);
  return rnewton::sphere::make_problem(
      rnewton::sphere::NonconservativeProblem{B - B.transpose(), probe.unit(n + 1)});
}

inline rnewton::FieldProblem random_rayleigh(Probe &probe, Index n) {
  return rnewton::sphere::make_problem(rnewton::sphere::RayleighProblem{probe.symmetric(n + 1)});
}

inline rnewton::FieldProblem random_tsvd(Probe &probe, Index m, Index n, Index p) {
  rnewton::stiefel::TsvdProblem tp;
  tp.A = probe.matrix(m, n);
  tp.mu.resize(p);
  for (Index i = 0; i < p; ++i)
    tp.mu(i) = static_cast<double>(p - i);
  return rnewton::stiefel::make_problem(std::move(tp));
}

/// One random (problem, point) pair per family.
inline std::vector<FamilyCase> random_cases(Probe &probe) {
  using rnewton::RetractionKind;
  std::vector<FamilyCase> out;
  out.push_back({"sphere-nc", random_nc(probe, 4), rnewton::sphere::point(probe.unit(5)),
                 RetractionKind::SphereProj});
  out.push_back({"rayleigh", random_rayleigh(probe, 5), rnewton::sphere::point(probe.unit(6)),
                 RetractionKind::SphereExp});
  out.push_back({"tsvd", random_tsvd(probe, 5, 3, 2),
                 rnewton::stiefel::point(probe.frame(5, 2), probe.frame(3, 2)),
                 RetractionKind::StiefelPolar});
  out.push_back({"spd-f1", rnewton::spd::make_problem(rnewton::spd::Objective::F1),
                 rnewton::spd::point(probe.spd(4)), RetractionKind::SpdExpAffine});
  out.push_back({"spd-f2", rnewton::spd::make_problem(rnewton::spd::Objective::F2),
                 rnewton::spd::point(probe.spd(4)), RetractionKind::SpdExpAffine});
  return out;
}

/// Random tangent vector of unit norm at p.
inline Mat random_tangent(Probe &probe, const rnewton::Point &p) {
  Mat w = probe.matrix(p.ambient.rows(), p.ambient.cols());
  if (p.tag == rnewton::ManifoldTag::SpdCone)
    w = 0.5 * (w + w.transpose());
  Mat v = rnewton::project_tangent(p, w);
  return v / rnewton::norm(p, v);
}

} // namespace oracle
