// Geometry of the unit sphere S^n in R^{n+1} and the two sphere test problems:
// a nonconservative field with a prescribed singularity, and the Rayleigh
// quotient.

#pragma once

#include "rnewton/core.hpp"

namespace rnewton::sphere {

/// Validated sphere point from a unit vector.
Point point(const Vec &x);

/// (I - p p^T) w.
Vec project_tangent(const Vec &p, const Vec &w);

/// Exp: cos|v| p + sin|v| v/|v|.  Proj: (p + v)/|p + v|.
Vec retract(RetractionKind kind, const Vec &p, const Vec &v);

/// X(p) = Q(p - pbar) - <p, Q(p - pbar)> p, with Q skew-symmetric.
struct NonconservativeProblem {
  Mat Q;
  Vec pbar;
};

Vec field_nc(const NonconservativeProblem &problem, const Vec &p);

/// nabla X(p) v = (I - p p^T) Q v - <p, Q(p - pbar)> v.
Vec field_nc_operator(const NonconservativeProblem &problem, const Vec &p, const Vec &v);

/// f(p) = p^T A p with A symmetric.
struct RayleighProblem {
  Mat A;
};

double rayleigh_value(const RayleighProblem &problem, const Vec &p);

/// 2 (I - p p^T) A p.
Vec rayleigh_grad(const RayleighProblem &problem, const Vec &p);

/// 2 (I - p p^T) A v - 2 (p^T A p) v.
Vec rayleigh_hess(const RayleighProblem &problem, const Vec &p, const Vec &v);

FieldProblem make_problem(NonconservativeProblem problem);
FieldProblem make_problem(RayleighProblem problem);

} // namespace rnewton::sphere
