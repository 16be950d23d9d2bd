// Stiefel manifold St(p,m) = {P in R^{m x p} : P^T P = I_p} with the embedded
// Frobenius metric, its retractions, and the truncated SVD problem
//
//   min F(P,Q) = Tr(-P^T A Q N)  over St(p,m) x St(p,n).

#pragma once

#include "rnewton/core.hpp"

namespace rnewton::stiefel {

/// sym(X) = (X + X^T)/2.
Mat sym(const Mat &X);

/// W - P sym(P^T W).
Mat project_tangent(const Mat &P, const Mat &W);

/// Thin QR with R's diagonal made nonnegative. Columns whose remainder after
/// orthogonalization falls below `drop_tol` (relative to the input scale) get a
/// zero Q column and a zero R row instead of being normalized.
struct ThinQr {
  Mat Q;
  Mat R;
};
ThinQr thin_qr_positive(const Mat &A, double drop_tol = 1e-12);

/// qf(A): orthogonal factor of the Householder QR with a positive triangular
/// diagonal. nullopt if A is column-rank-deficient (|R_jj| < 1e-12).
std::optional<Mat> qf(const Mat &A);

/// Exp (geodesic via a 2p x 2p matrix exponential), Cayley, Polar, Qf.
/// nullopt only for Qf on a degenerate factor.
std::optional<Mat> retract(RetractionKind kind, const Mat &P, const Mat &V);

struct ProductPoint {
  Mat P; // m x p
  Mat Q; // n x p
};

Point point(const Mat &P, const Mat &Q);
ProductPoint unstack(const Point &x);
ProductPoint unstack(const Mat &stacked, Index split);
Mat stack(const Mat &top, const Mat &bottom);

struct TsvdProblem {
  Mat A;  // m x n, m >= n
  Vec mu; // diagonal of N, strictly decreasing and positive
};

/// Throws std::invalid_argument unless p <= n <= m and mu is strictly
/// decreasing and positive.
void validate(const TsvdProblem &problem);

double tsvd_value(const TsvdProblem &problem, const ProductPoint &x);

/// (P S1 - A Q N, Q S2 - A^T P N) with S1 = sym(P^T A Q N), S2 = sym(Q^T A^T P N).
ProductPoint tsvd_field(const TsvdProblem &problem, const ProductPoint &x);

/// Hessian of F at x applied to (dP, dQ):
///   (Pi_P(dP S1 - A dQ N), Pi_Q(dQ S2 - A^T dP N)).
ProductPoint tsvd_operator(const TsvdProblem &problem, const ProductPoint &x,
                           const ProductPoint &d);

FieldProblem make_problem(TsvdProblem problem);

} // namespace rnewton::stiefel
