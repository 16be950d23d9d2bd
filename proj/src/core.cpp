#include "rnewton/core.hpp"

#include "rnewton/sphere.hpp"
#include "rnewton/spd.hpp"
#include "rnewton/stiefel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include <array>
#include <cmath>
#include <utility>

namespace rnewton {

namespace {

constexpr std::array<std::pair<RetractionKind, std::string_view>, 10> kRetractionNames{{
    {RetractionKind::SphereExp, "sphere-exp"},
    {RetractionKind::SphereProj, "sphere-proj"},
    {RetractionKind::StiefelExp, "stiefel-exp"},
    {RetractionKind::StiefelCayley, "stiefel-cayley"},
    {RetractionKind::StiefelPolar, "stiefel-polar"},
    {RetractionKind::StiefelQf, "stiefel-qf"},
    {RetractionKind::SpdExpAffine, "spd-exp"},
    {RetractionKind::SpdExpFactored, "spd-exp-factored"},
    {RetractionKind::SpdSecondOrder, "spd-second-order"},
    {RetractionKind::SpdFirstOrder, "spd-first-order"},
}};

void check_same_base(const PointPtr &a, const PointPtr &b) {
  if (a == b)
    return;
  if (!a || !b || a->tag != b->tag || a->split != b->split ||
      a->ambient.rows() != b->ambient.rows() || a->ambient.cols() != b->ambient.cols() ||
      a->ambient != b->ambient)
    throw BaseMismatch();
}

// Orthonormal basis of T_P St(k, m): P (E_ij - E_ji) / sqrt(2) for i < j,
// then P_perp e_a e_j^T, with P_perp completed by Householder QR.
std::vector<Mat> stiefel_factor_basis(const Mat &P) {
  const Index m = P.rows();
  const Index k = P.cols();
  const Mat Q = Eigen::HouseholderQR<Mat>(P).householderQ();
  std::vector<Mat> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < k; ++j)
    for (Index i = j + 1; i < k; ++i) {
      Mat b = Mat::Zero(m, k);
      b.col(j) = r * P.col(i);
      b.col(i) = -r * P.col(j);
      out.push_back(std::move(b));
    }
  for (Index j = 0; j < k; ++j)
    for (Index a = k; a < m; ++a) {
      Mat b = Mat::Zero(m, k);
      b.col(j) = Q.col(a);
      out.push_back(std::move(b));
    }
  return out;
}

Mat unflatten(const Vec &flat, Index rows, Index cols) {
  return Eigen::Map<const Mat>(flat.data(), rows, cols);
}

} // namespace

std::string_view to_string(ManifoldTag tag) {
  switch (tag) {
  case ManifoldTag::Sphere:
    return "sphere";
  case ManifoldTag::StiefelProduct:
    return "stiefel-product";
  case ManifoldTag::SpdCone:
    return "spd";
  }
  return "unknown";
}

std::string_view to_string(RetractionKind kind) {
  for (const auto &[k, name] : kRetractionNames)
    if (k == kind)
      return name;
  return "unknown";
}

std::optional<RetractionKind> parse_retraction(std::string_view name) {
  for (const auto &[k, n] : kRetractionNames)
    if (n == name)
      return k;
  return std::nullopt;
}

ManifoldTag manifold_of(RetractionKind kind) {
  switch (kind) {
  case RetractionKind::SphereExp:
  case RetractionKind::SphereProj:
    return ManifoldTag::Sphere;
  case RetractionKind::StiefelExp:
  case RetractionKind::StiefelCayley:
  case RetractionKind::StiefelPolar:
  case RetractionKind::StiefelQf:
    return ManifoldTag::StiefelProduct;
  default:
    return ManifoldTag::SpdCone;
  }
}

std::vector<RetractionKind> retractions_for(ManifoldTag tag) {
  std::vector<RetractionKind> out;
  for (const auto &entry : kRetractionNames)
    if (manifold_of(entry.first) == tag)
      out.push_back(entry.first);
  return out;
}

bool on_manifold(const Point &p, double tol) {
  const Mat &a = p.ambient;
  if (!a.allFinite())
    return false;
  switch (p.tag) {
  case ManifoldTag::Sphere:
    return a.cols() == 1 && a.rows() >= 2 && std::abs(a.norm() - 1.0) <= tol;
  case ManifoldTag::StiefelProduct: {
    if (p.split <= 0 || p.split >= a.rows())
      return false;
    const auto x = stiefel::unstack(p);
    const Index k = a.cols();
    if (k > x.P.rows() || k > x.Q.rows())
      return false;
    const Mat I = Mat::Identity(k, k);
    return (x.P.transpose() * x.P - I).norm() <= tol && (x.Q.transpose() * x.Q - I).norm() <= tol;
  }
  case ManifoldTag::SpdCone: {
    if (a.rows() != a.cols() || a.rows() == 0)
      return false;
    if ((a - a.transpose()).norm() > tol * std::max(1.0, a.norm()))
      return false;
    Eigen::LLT<Mat> llt(spd::symmetrize(a));
    return llt.info() == Eigen::Success;
  }
  }
  return false;
}

void require_on_manifold(const Point &p, double tol) {
  if (!on_manifold(p, tol))
    throw std::invalid_argument(std::string("point is not on the ") +
                                std::string(to_string(p.tag)) + " manifold");
}

Index manifold_dim(const Point &p) {
  switch (p.tag) {
  case ManifoldTag::Sphere:
    return p.ambient.rows() - 1;
  case ManifoldTag::StiefelProduct: {
    const Index k = p.ambient.cols();
    const Index m = p.split;
    const Index n = p.ambient.rows() - p.split;
    return (m * k - k * (k + 1) / 2) + (n * k - k * (k + 1) / 2);
  }
  case ManifoldTag::SpdCone: {
    const Index n = p.ambient.rows();
    return n * (n + 1) / 2;
  }
  }
  return 0;
}

bool is_tangent(const Point &p, const Mat &v, double tol) {
  if (v.rows() != p.ambient.rows() || v.cols() != p.ambient.cols() || !v.allFinite())
    return false;
  switch (p.tag) {
  case ManifoldTag::Sphere:
    return std::abs(p.ambient.col(0).dot(v.col(0))) <= tol;
  case ManifoldTag::StiefelProduct: {
    const auto x = stiefel::unstack(p);
    const auto d = stiefel::unstack(v, p.split);
    return stiefel::sym(x.P.transpose() * d.P).norm() <= tol &&
           stiefel::sym(x.Q.transpose() * d.Q).norm() <= tol;
  }
  case ManifoldTag::SpdCone:
    return (v - v.transpose()).norm() <= tol;
  }
  return false;
}

Mat project_tangent(const Point &p, const Mat &w) {
  switch (p.tag) {
  case ManifoldTag::Sphere:
    return sphere::project_tangent(p.ambient.col(0), w.col(0));
  case ManifoldTag::StiefelProduct: {
    const auto x = stiefel::unstack(p);
    const auto d = stiefel::unstack(w, p.split);
    return stiefel::stack(stiefel::project_tangent(x.P, d.P), stiefel::project_tangent(x.Q, d.Q));
  }
  case ManifoldTag::SpdCone:
    return spd::symmetrize(w);
  }
  return w;
}

double inner(const Point &p, const Mat &u, const Mat &v) {
  switch (p.tag) {
  case ManifoldTag::Sphere:
  case ManifoldTag::StiefelProduct:
    return (u.array() * v.array()).sum();
  case ManifoldTag::SpdCone:
    return spd::inner(p.ambient, u, v);
  }
  return 0.0;
}

double inner(const TangentVector &u, const TangentVector &v) {
  check_same_base(u.base, v.base);
  return inner(*u.base, u.ambient, v.ambient);
}

double norm(const Point &p, const Mat &v) { return std::sqrt(std::max(0.0, inner(p, v, v))); }

double norm(const TangentVector &v) { return norm(*v.base, v.ambient); }

std::optional<Point> retract(RetractionKind kind, const Point &p, const Mat &v) {
  if (manifold_of(kind) != p.tag)
    throw std::invalid_argument(std::string("retraction ") + std::string(to_string(kind)) +
                                " does not apply to the " + std::string(to_string(p.tag)) +
                                " manifold");
  switch (p.tag) {
  case ManifoldTag::Sphere:
    return Point{p.tag, sphere::retract(kind, p.ambient.col(0), v.col(0)), 0};
  case ManifoldTag::StiefelProduct: {
    const auto x = stiefel::unstack(p);
    const auto d = stiefel::unstack(v, p.split);
    auto P = stiefel::retract(kind, x.P, d.P);
    if (!P)
      return std::nullopt;
    auto Q = stiefel::retract(kind, x.Q, d.Q);
    if (!Q)
      return std::nullopt;
    return Point{p.tag, stiefel::stack(*P, *Q), p.split};
  }
  case ManifoldTag::SpdCone: {
    auto P = spd::retract(kind, p.ambient, v);
    if (!P)
      return std::nullopt;
    return Point{p.tag, std::move(*P), 0};
  }
  }
  return std::nullopt;
}

RetractionCurve retraction_curve(RetractionKind kind, const Point &p, const Mat &v) {
  if (p.tag == ManifoldTag::SpdCone && manifold_of(kind) == p.tag) {
    auto curve = spd::retraction_curve(kind, p.ambient, v);
    return [curve = std::move(curve)](double alpha) -> std::optional<Point> {
      auto P = curve(alpha);
      if (!P)
        return std::nullopt;
      return Point{ManifoldTag::SpdCone, std::move(*P), 0};
    };
  }
  return [kind, p, v](double alpha) { return retract(kind, p, alpha * v); };
}

// ---------------------------------------------------------------------------
// Tangent bases

TangentBasis tangent_basis(const PointPtr &p) {
  TangentBasis basis;
  basis.base_ = p;
  const Index rows = p->ambient.rows();
  const Index cols = p->ambient.cols();

  if (p->tag == ManifoldTag::SpdCone) {
    Eigen::LLT<Mat> llt(p->ambient);
    basis.chol_ = llt.matrixL();
    const Mat &L = basis.chol_;
    const double r = 1.0 / std::sqrt(2.0);
    for (Index j = 0; j < rows; ++j)
      for (Index i = j; i < rows; ++i) {
        Mat b;
        if (i == j)
          b = L.col(i) * L.col(i).transpose();
        else
          b = r * (L.col(i) * L.col(j).transpose() + L.col(j) * L.col(i).transpose());
        basis.vectors_.push_back(std::move(b));
      }
    return basis;
  }

  if (p->tag == ManifoldTag::Sphere) {
    basis.vectors_ = stiefel_factor_basis(p->ambient);
  } else {
    const Index m = p->split;
    const Index n = rows - m;
    for (Mat &b : stiefel_factor_basis(p->ambient.topRows(m))) {
      Mat s = Mat::Zero(rows, cols);
      s.topRows(m) = b;
      basis.vectors_.push_back(std::move(s));
    }
    for (Mat &b : stiefel_factor_basis(p->ambient.bottomRows(n))) {
      Mat s = Mat::Zero(rows, cols);
      s.bottomRows(n) = b;
      basis.vectors_.push_back(std::move(s));
    }
  }
  basis.flat_.resize(rows * cols, static_cast<Index>(basis.vectors_.size()));
  for (Index k = 0; k < basis.flat_.cols(); ++k)
    basis.flat_.col(k) = Eigen::Map<const Vec>(basis[k].data(), rows * cols);
  return basis;
}

Vec TangentBasis::coordinates(const Mat &v) const {
  if (base_->tag == ManifoldTag::SpdCone) {
    const auto L = chol_.triangularView<Eigen::Lower>();
    Mat W = L.solve(v);
    W = L.solve(W.transpose()).transpose();
    const Index n = W.rows();
    const double s = std::sqrt(2.0);
    Vec c(size());
    Index k = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = j; i < n; ++i)
        c(k++) = (i == j) ? W(i, i) : s * 0.5 * (W(i, j) + W(j, i));
    return c;
  }
  return flat_.transpose() * Eigen::Map<const Vec>(v.data(), v.size());
}

Mat TangentBasis::combine(const Vec &c) const {
  const Index rows = base_->ambient.rows();
  const Index cols = base_->ambient.cols();
  if (base_->tag == ManifoldTag::SpdCone) {
    Mat W = Mat::Zero(rows, rows);
    const double r = 1.0 / std::sqrt(2.0);
    Index k = 0;
    for (Index j = 0; j < rows; ++j)
      for (Index i = j; i < rows; ++i) {
        if (i == j) {
          W(i, i) = c(k++);
        } else {
          W(i, j) = r * c(k);
          W(j, i) = r * c(k++);
        }
      }
    return chol_ * W * chol_.transpose();
  }
  return unflatten(flat_ * c, rows, cols);
}

// ---------------------------------------------------------------------------
// Operators

TangentVector TangentOperator::apply(const TangentVector &v) const {
  check_same_base(base, v.base);
  return {base, apply_ambient(v.ambient)};
}

Mat operator_to_matrix(const TangentOperator &op, const TangentBasis &basis) {
  check_same_base(op.base, basis.base());
  const Index d = basis.size();
  Mat M(d, d);
  for (Index j = 0; j < d; ++j)
    M.col(j) = basis.coordinates(op(basis[j]));
  return M;
}

Mat adjoint_apply(const TangentOperator &op, const TangentBasis &basis, const Mat &u) {
  const Mat M = operator_to_matrix(op, basis);
  return basis.combine(M.transpose() * basis.coordinates(u));
}

std::optional<Mat> solve_newton_system(const TangentOperator &op, const Mat &rhs,
                                       const SolveOptions &opts) {
  const Point &p = *op.base;
  const double rhs_norm = norm(p, rhs);
  auto residual_ok = [&](const Mat &v) {
    if (!v.allFinite())
      return false;
    const double res = norm(p, op(v) + rhs);
    return res <= opts.residual_tol * std::max(1.0, rhs_norm);
  };

  if (op.structured_solve && opts.use_structured) {
    auto v = op.structured_solve(-rhs);
    if (!v || !residual_ok(*v))
      return std::nullopt;
    return v;
  }

  const TangentBasis basis = tangent_basis(op.base);
  const Mat M = operator_to_matrix(op, basis);
  const double scale = M.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale))
    return std::nullopt;
  Eigen::PartialPivLU<Mat> lu(M);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < opts.pivot_tol * scale)
    return std::nullopt;
  const Vec x = lu.solve(-basis.coordinates(rhs));
  Mat v = basis.combine(x);
  if (!residual_ok(v))
    return std::nullopt;
  return v;
}

std::optional<TangentVector> solve_newton_system(const TangentOperator &op,
                                                 const TangentVector &rhs,
                                                 const SolveOptions &opts) {
  check_same_base(op.base, rhs.base);
  auto v = solve_newton_system(op, rhs.ambient, opts);
  if (!v)
    return std::nullopt;
  return TangentVector{op.base, std::move(*v)};
}

// ---------------------------------------------------------------------------
// Merit function

double merit_value(const FieldProblem &problem, const Point &p) {
  const double s = problem.stationarity(p);
  return 0.5 * s * s;
}

Mat merit_gradient(const TangentOperator &op, const Mat &x) {
  if (op.self_adjoint)
    return op(x);
  return adjoint_apply(op, tangent_basis(op.base), x);
}

Mat merit_gradient(const FieldProblem &problem, const PointPtr &p) {
  return merit_gradient(problem.derivative(p), problem.value(*p));
}

} // namespace rnewton
