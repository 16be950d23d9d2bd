// The cone of symmetric positive definite matrices with the affine-invariant
// metric <U,V>_P = tr(V P^-1 U P^-1), and two test objectives
//
//   f1(P) = ln det P + tr P^-1,    f2(P) = ln det P - tr P,
//
// both with unique critical point P = I.

#pragma once

#include "rnewton/core.hpp"

namespace rnewton::spd {

enum class Objective { F1, F2 };

std::string_view to_string(Objective which);

Point point(const Mat &P);

/// (M + M^T)/2.
Mat symmetrize(const Mat &M);

/// Symmetric eigendecomposition based matrix functions.
Mat sqrtm(const Mat &P);
Mat inv_sqrtm(const Mat &P);
Mat expm_sym(const Mat &S);

/// tr(V P^-1 U P^-1).
double inner(const Mat &P, const Mat &U, const Mat &V);

/// ExpAffine, ExpFactored, SecondOrder, FirstOrder. nullopt (infeasible) when
/// the result fails a Cholesky factorization.
std::optional<Mat> retract(RetractionKind kind, const Mat &P, const Mat &V);

/// alpha -> retract(kind, P, alpha V). ExpAffine reuses one eigendecomposition
/// and SecondOrder reuses V P^-1 V.
std::function<std::optional<Mat>(double)> retraction_curve(RetractionKind kind, const Mat &P,
                                                           const Mat &V);

/// X1(P) = P - I and X2(P) = P - P^2: the affine-metric gradients.
Mat spd_field(Objective which, const Mat &P);

/// H1(V) = (P^-1 V + V P^-1)/2,  H2(V) = -(P V + V P)/2.
Mat spd_newton_operator(Objective which, const Mat &P, const Mat &V);

/// Solves H(V) = R in the eigenbasis of P.
Mat spd_newton_solve(Objective which, const Mat &P, const Mat &R);

/// Cholesky log-determinant based value. Throws std::domain_error if P is not
/// positive definite.
double spd_objective_value(Objective which, const Mat &P);

FieldProblem make_problem(Objective which);

} // namespace rnewton::spd
