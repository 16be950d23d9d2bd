#include "rnewton/stiefel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace rnewton::stiefel {

Mat sym(const Mat &X) { return 0.5 * (X + X.transpose()); }

Mat project_tangent(const Mat &P, const Mat &W) { return W - P * sym(P.transpose() * W); }

ThinQr thin_qr_positive(const Mat &A, double drop_tol) {
  const Index m = A.rows();
  const Index k = A.cols();
  ThinQr out{Mat::Zero(m, k), Mat::Zero(k, k)};
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (Index j = 0; j < k; ++j) {
    Vec w = A.col(j);
    // Two passes of modified Gram-Schmidt; zero columns of Q contribute nothing.
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < j; ++i) {
        const double r = out.Q.col(i).dot(w);
        out.R(i, j) += r;
        w -= r * out.Q.col(i);
      }
    const double nw = w.norm();
    if (nw <= drop_tol * scale)
      continue;
    out.R(j, j) = nw;
    out.Q.col(j) = w / nw;
  }
  return out;
}

std::optional<Mat> qf(const Mat &A) {
  const Index m = A.rows();
  const Index k = A.cols();
  Eigen::HouseholderQR<Mat> qr(A);
  const Mat R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Mat Q = qr.householderQ() * Mat::Identity(m, k);
  for (Index j = 0; j < k; ++j) {
    const double d = R(j, j);
    if (std::abs(d) < 1e-12)
      return std::nullopt;
    if (d < 0.0)
      Q.col(j) = -Q.col(j);
  }
  return Q;
}

namespace {

// Geodesic of the embedded metric:
//   R_P(V) = P M + Q N,  [M; N] = exp([P^T V, -R^T; R, 0]) [I; 0],
// where Q R is the compact QR of (I - P P^T) V.
Mat retract_exp(const Mat &P, const Mat &V) {
  const Index k = P.cols();
  const Mat A = P.transpose() * V;
  const ThinQr qr = thin_qr_positive(V - P * A);
  Mat block = Mat::Zero(2 * k, 2 * k);
  block.topLeftCorner(k, k) = A;
  block.topRightCorner(k, k) = -qr.R.transpose();
  block.bottomLeftCorner(k, k) = qr.R;
  const Mat E = block.exp();
  return P * E.topLeftCorner(k, k) + qr.Q * E.bottomLeftCorner(k, k);
}

// Cayley transform Y = (I - W/2)^-1 (I + W/2) P with the skew W = U Z^T,
// U = [Pi V, P], Z = [P, -Pi V], Pi = I - P P^T / 2, evaluated through the
// 2k x 2k Sherman-Morrison-Woodbury form P + U (I - Z^T U / 2)^-1 Z^T P.
Mat retract_cayley(const Mat &P, const Mat &V) {
  const Index k = P.cols();
  const Mat PiV = V - 0.5 * P * (P.transpose() * V);
  Mat U(P.rows(), 2 * k);
  U << PiV, P;
  Mat Z(P.rows(), 2 * k);
  Z << P, -PiV;
  const Mat inner = Mat::Identity(2 * k, 2 * k) - 0.5 * Z.transpose() * U;
  return P + U * inner.partialPivLu().solve(Z.transpose() * P);
}

// (P + V)(I + V^T V)^{-1/2}.
Mat retract_polar(const Mat &P, const Mat &V) {
  const Index k = P.cols();
  const Mat G = Mat::Identity(k, k) + V.transpose() * V;
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  const Vec s = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return (P + V) * (es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose());
}

} // namespace

std::optional<Mat> retract(RetractionKind kind, const Mat &P, const Mat &V) {
  if (V.isZero(0.0))
    return P;
  switch (kind) {
  case RetractionKind::StiefelExp:
    return retract_exp(P, V);
  case RetractionKind::StiefelCayley:
    return retract_cayley(P, V);
  case RetractionKind::StiefelPolar:
    return retract_polar(P, V);
  case RetractionKind::StiefelQf:
    return qf(P + V);
  default:
    throw std::invalid_argument("not a Stiefel retraction");
  }
}

Mat stack(const Mat &top, const Mat &bottom) {
  Mat out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

ProductPoint unstack(const Mat &stacked, Index split) {
  return {stacked.topRows(split), stacked.bottomRows(stacked.rows() - split)};
}

ProductPoint unstack(const Point &x) { return unstack(x.ambient, x.split); }

Point point(const Mat &P, const Mat &Q) {
  if (P.cols() != Q.cols())
    throw std::invalid_argument("Stiefel product: factors need the same column count");
  Point x{ManifoldTag::StiefelProduct, stack(P, Q), P.rows()};
  require_on_manifold(x);
  return x;
}

void validate(const TsvdProblem &problem) {
  const Index m = problem.A.rows();
  const Index n = problem.A.cols();
  const Index p = problem.mu.size();
  if (!(p >= 1 && p <= n && n <= m))
    throw std::invalid_argument("truncated SVD problem needs p <= n <= m");
  for (Index i = 0; i < p; ++i) {
    if (!(problem.mu(i) > 0.0))
      throw std::invalid_argument("truncated SVD problem: N must be positive");
    if (i > 0 && !(problem.mu(i) < problem.mu(i - 1)))
      throw std::invalid_argument("truncated SVD problem: N must be strictly decreasing");
  }
}

double tsvd_value(const TsvdProblem &problem, const ProductPoint &x) {
  return -(x.P.transpose() * problem.A * x.Q * problem.mu.asDiagonal()).trace();
}

ProductPoint tsvd_field(const TsvdProblem &problem, const ProductPoint &x) {
  const auto N = problem.mu.asDiagonal();
  const Mat AQN = problem.A * x.Q * N;
  const Mat AtPN = problem.A.transpose() * x.P * N;
  const Mat S1 = sym(x.P.transpose() * AQN);
  const Mat S2 = sym(x.Q.transpose() * AtPN);
  return {x.P * S1 - AQN, x.Q * S2 - AtPN};
}

ProductPoint tsvd_operator(const TsvdProblem &problem, const ProductPoint &x,
                           const ProductPoint &d) {
  const auto N = problem.mu.asDiagonal();
  const Mat S1 = sym(x.P.transpose() * problem.A * x.Q * N);
  const Mat S2 = sym(x.Q.transpose() * problem.A.transpose() * x.P * N);
  return {project_tangent(x.P, d.P * S1 - problem.A * d.Q * N),
          project_tangent(x.Q, d.Q * S2 - problem.A.transpose() * d.P * N)};
}

FieldProblem make_problem(TsvdProblem problem) {
  validate(problem);
  auto data = std::make_shared<const TsvdProblem>(std::move(problem));
  FieldProblem fp;
  fp.name = "tsvd";
  fp.manifold = ManifoldTag::StiefelProduct;
  fp.value = [data](const Point &p) -> Mat {
    const auto g = tsvd_field(*data, unstack(p));
    return stack(g.P, g.Q);
  };
  fp.derivative = [data](const PointPtr &p) {
    TangentOperator op;
    op.base = p;
    op.self_adjoint = true;
    op.apply_ambient = [data, p](const Mat &v) -> Mat {
      const auto h = tsvd_operator(*data, unstack(*p), unstack(v, p->split));
      return stack(h.P, h.Q);
    };
    return op;
  };
  fp.objective = [data](const Point &p) { return tsvd_value(*data, unstack(p)); };
  fp.retractions = retractions_for(ManifoldTag::StiefelProduct);
  fp.gradient_field = true;
  return fp;
}

} // namespace rnewton::stiefel
