#include "rnewton/spd.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace rnewton::spd {

std::string_view to_string(Objective which) { return which == Objective::F1 ? "f1" : "f2"; }

Point point(const Mat &P) {
  Point p{ManifoldTag::SpdCone, P, 0};
  require_on_manifold(p);
  return p;
}

Mat symmetrize(const Mat &M) { return 0.5 * (M + M.transpose()); }

namespace {

template <class F> Mat spectral_map(const Mat &S, F &&f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  const Vec d = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

std::optional<Mat> checked(Mat M) {
  M = symmetrize(M);
  if (!M.allFinite())
    return std::nullopt;
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success)
    return std::nullopt;
  return M;
}

} // namespace

Mat sqrtm(const Mat &P) {
  return spectral_map(P, [](double x) { return std::sqrt(x); });
}

Mat inv_sqrtm(const Mat &P) {
  return spectral_map(P, [](double x) { return 1.0 / std::sqrt(x); });
}

Mat expm_sym(const Mat &S) {
  return spectral_map(S, [](double x) { return std::exp(x); });
}

double inner(const Mat &P, const Mat &U, const Mat &V) {
  Eigen::LLT<Mat> llt(P);
  // tr(P^-1 U P^-1 V) = <L^-1 U L^-T, L^-1 V L^-T>_F with P = L L^T.
  const auto L = llt.matrixL();
  auto whiten = [&](const Mat &A) -> Mat {
    Mat W = L.solve(A);
    return L.solve(W.transpose()).transpose();
  };
  const Mat Wu = whiten(U);
  if (&U == &V)
    return Wu.squaredNorm();
  return (Wu.array() * whiten(V).array()).sum();
}

std::optional<Mat> retract(RetractionKind kind, const Mat &P, const Mat &V) {
  if (V.isZero(0.0))
    return P;
  switch (kind) {
  case RetractionKind::SpdExpAffine: {
    const Mat h = sqrtm(P);
    const Mat hi = inv_sqrtm(P);
    return checked(h * expm_sym(symmetrize(hi * V * hi)) * h);
  }
  case RetractionKind::SpdExpFactored: {
    const Mat PinvV = P.llt().solve(V);
    return checked(P * PinvV.exp());
  }
  case RetractionKind::SpdSecondOrder:
    return checked(P + V + 0.5 * V * P.llt().solve(V));
  case RetractionKind::SpdFirstOrder:
    return checked(P + V);
  default:
    throw std::invalid_argument("not an SPD retraction");
  }
}

std::function<std::optional<Mat>(double)> retraction_curve(RetractionKind kind, const Mat &P,
                                                           const Mat &V) {
  if (V.isZero(0.0))
    return [P](double) -> std::optional<Mat> { return P; };
  switch (kind) {
  case RetractionKind::SpdExpAffine: {
    const Mat hi = inv_sqrtm(P);
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(hi * V * hi));
    const Mat G = sqrtm(P) * es.eigenvectors();
    const Vec lambda = es.eigenvalues();
    return [G, lambda](double alpha) {
      return checked(G * (alpha * lambda).array().exp().matrix().asDiagonal() * G.transpose());
    };
  }
  case RetractionKind::SpdSecondOrder: {
    const Mat W = V * P.llt().solve(V);
    return [P, V, W](double alpha) { return checked(P + alpha * V + (0.5 * alpha * alpha) * W); };
  }
  case RetractionKind::SpdFirstOrder:
    return [P, V](double alpha) { return checked(P + alpha * V); };
  default:
    return [kind, P, V](double alpha) { return retract(kind, P, alpha * V); };
  }
}

Mat spd_field(Objective which, const Mat &P) {
  const Mat I = Mat::Identity(P.rows(), P.cols());
  if (which == Objective::F1)
    return P - I;
  return symmetrize(P - P * P);
}

Mat spd_newton_operator(Objective which, const Mat &P, const Mat &V) {
  if (which == Objective::F1) {
    const Mat PinvV = P.llt().solve(V);
    return symmetrize(PinvV); // (P^-1 V + V P^-1)/2 for symmetric V
  }
  return -symmetrize(P * V);
}

Mat spd_newton_solve(Objective which, const Mat &P, const Mat &R) {
  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  const Mat &U = es.eigenvectors();
  const Vec &lam = es.eigenvalues();
  Mat Rt = U.transpose() * R * U;
  for (Index j = 0; j < Rt.cols(); ++j)
    for (Index i = 0; i < Rt.rows(); ++i) {
      const double h = which == Objective::F1 ? 0.5 * (1.0 / lam(i) + 1.0 / lam(j))
                                              : -0.5 * (lam(i) + lam(j));
      Rt(i, j) /= h;
    }
  return symmetrize(U * Rt * U.transpose());
}

double spd_objective_value(Objective which, const Mat &P) {
  Eigen::LLT<Mat> llt(P);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("objective evaluated outside the SPD cone");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  if (which == Objective::F1) {
    const Mat Pinv = llt.solve(Mat::Identity(P.rows(), P.cols()));
    return logdet + Pinv.trace();
  }
  return logdet - P.trace();
}

FieldProblem make_problem(Objective which) {
  FieldProblem fp;
  fp.name = std::string("spd-") + std::string(to_string(which));
  fp.manifold = ManifoldTag::SpdCone;
  fp.value = [which](const Point &p) -> Mat { return spd_field(which, p.ambient); };
  fp.derivative = [which](const PointPtr &p) {
    TangentOperator op;
    op.base = p;
    op.self_adjoint = true;
    if (which == Objective::F1) {
      auto llt = std::make_shared<const Eigen::LLT<Mat>>(p->ambient);
      op.apply_ambient = [llt](const Mat &v) -> Mat { return symmetrize(llt->solve(v)); };
    } else {
      op.apply_ambient = [p](const Mat &v) -> Mat { return -symmetrize(p->ambient * v); };
    }
    op.structured_solve = [which, p](const Mat &rhs) -> std::optional<Mat> {
      return spd_newton_solve(which, p->ambient, rhs);
    };
    return op;
  };
  fp.objective = [which](const Point &p) { return spd_objective_value(which, p.ambient); };
  fp.retractions = retractions_for(ManifoldTag::SpdCone);
  fp.gradient_field = true;
  return fp;
}

} // namespace rnewton::spd
