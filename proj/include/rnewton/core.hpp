/** Manifold-agnostic machinery shared by the Newton solvers: points and
 * tangent vectors stored as dense ambient arrays, the Riemannian metric,
 * orthonormal tangent bases, tangent-space linear operators, and the merit
 * function phi(p) = 1/2 |X(p)|^2 with its gradient. */

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rnewton {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ManifoldTag { Sphere, StiefelProduct, SpdCone };

std::string_view to_string(ManifoldTag tag);

/// The ten retractions the library knows about, grouped by manifold.
enum class RetractionKind {
  SphereExp,
  SphereProj,
  StiefelExp,
  StiefelCayley,
  StiefelPolar,
  StiefelQf,
  SpdExpAffine,
  SpdExpFactored,
  SpdSecondOrder,
  SpdFirstOrder,
};

std::string_view to_string(RetractionKind kind);
std::optional<RetractionKind> parse_retraction(std::string_view name);
ManifoldTag manifold_of(RetractionKind kind);
std::vector<RetractionKind> retractions_for(ManifoldTag tag);

/// Thrown when two tangent quantities live at different base points.
class BaseMismatch : public std::invalid_argument {
public:
  BaseMismatch() : std::invalid_argument("tangent vectors have different base points") {}
};

/// A point on one of the supported manifolds.
///
/// Sphere: (n+1) x 1 unit vector. StiefelProduct: the pair (P, Q) stacked as
/// an (m+n) x p matrix whose first `split` rows hold P. SpdCone: n x n SPD.
struct Point {
  ManifoldTag tag = ManifoldTag::Sphere;
  Mat ambient;
  Index split = 0;
};

using PointPtr = std::shared_ptr<const Point>;

inline PointPtr share(Point p) { return std::make_shared<const Point>(std::move(p)); }

/// Membership test within `tol`: unit norm, orthonormal columns, or
/// symmetric positive definite.
bool on_manifold(const Point &p, double tol = 1e-10);

/// Throws std::invalid_argument unless on_manifold(p, tol).
void require_on_manifold(const Point &p, double tol = 1e-10);

/// Intrinsic dimension of the manifold at p.
Index manifold_dim(const Point &p);

struct TangentVector {
  PointPtr base;
  Mat ambient;
};

/// Tangency test within `tol`: <p,v> = 0, sym(P^T V) = 0 per factor, or V
/// symmetric.
bool is_tangent(const Point &p, const Mat &v, double tol = 1e-10);

/// Orthogonal projection of an ambient array onto T_p M. For the SPD cone
/// this is symmetrization.
Mat project_tangent(const Point &p, const Mat &w);

/// Riemannian metric on ambient representatives of tangent vectors.
double inner(const Point &p, const Mat &u, const Mat &v);
double inner(const TangentVector &u, const TangentVector &v);
double norm(const Point &p, const Mat &v);
double norm(const TangentVector &v);

/// Retraction dispatch. nullopt means the retraction cannot produce a point
/// (SPD first-order step leaving the cone, or a rank-deficient qf factor).
std::optional<Point> retract(RetractionKind kind, const Point &p, const Mat &v);

/// alpha -> R_p(alpha v) with the per-direction work done once, for line
/// searches. Agrees with retract() up to round-off.
using RetractionCurve = std::function<std::optional<Point>(double)>;
RetractionCurve retraction_curve(RetractionKind kind, const Point &p, const Mat &v);

/// Orthonormal basis of T_p M under the manifold metric.
class TangentBasis {
public:
  TangentBasis() = default;

  const PointPtr &base() const { return base_; }
  Index size() const { return static_cast<Index>(vectors_.size()); }
  const std::vector<Mat> &vectors() const { return vectors_; }
  const Mat &operator[](Index i) const { return vectors_[static_cast<std::size_t>(i)]; }

  /// c_i = <b_i, v>.
  Vec coordinates(const Mat &v) const;

  /// sum_i c_i b_i.
  Mat combine(const Vec &c) const;

  friend TangentBasis tangent_basis(const PointPtr &p);

private:
  PointPtr base_;
  std::vector<Mat> vectors_;
  // Sphere / Stiefel: basis vectors flattened into the columns of this matrix.
  Mat flat_;
  // SPD: lower Cholesky factor L of P; basis vectors are L E_ij L^T.
  Mat chol_;
};

/// Orthonormal basis of T_p M with exactly manifold_dim(p) vectors. Sphere and
/// Stiefel factors use P skew(E_ij) and P_perp e_a e_j^T, so round-off drift of
/// p off the manifold never changes the count. The SPD cone uses the
/// congruence basis L E_ij L^T.
TangentBasis tangent_basis(const PointPtr &p);

/// A linear map T_p M -> T_p M.
struct TangentOperator {
  PointPtr base;
  std::function<Mat(const Mat &)> apply_ambient;
  /// Set when the operator is known to be self-adjoint under the metric
  /// (Hessians). Lets the merit gradient skip the basis assembly.
  bool self_adjoint = false;
  /// Optional closed-form inverse: returns w with op(w) = rhs.
  std::function<std::optional<Mat>(const Mat &)> structured_solve;

  Mat operator()(const Mat &v) const { return apply_ambient(v); }
  TangentVector apply(const TangentVector &v) const;
};

/// M(i,j) = <b_i, op(b_j)>.
Mat operator_to_matrix(const TangentOperator &op, const TangentBasis &basis);

/// Applies op^* to u through the transpose of the assembled matrix.
Mat adjoint_apply(const TangentOperator &op, const TangentBasis &basis, const Mat &u);

struct SolveOptions {
  double pivot_tol = 1e-12;
  double residual_tol = 1e-8;
  /// Use the operator's structured_solve, when present, instead of the dense
  /// LU. The residual test applies either way.
  bool use_structured = true;
};

/// Solves op(v) = -rhs. Returns nullopt when the system is numerically
/// singular: a pivot below pivot_tol * max|M| or a residual
/// |op(v) + rhs| above residual_tol * max(1, |rhs|).
std::optional<Mat> solve_newton_system(const TangentOperator &op, const Mat &rhs,
                                       const SolveOptions &opts = {});
std::optional<TangentVector> solve_newton_system(const TangentOperator &op,
                                                 const TangentVector &rhs,
                                                 const SolveOptions &opts = {});

/// A vector field X with its covariant derivative. For gradient fields X is
/// grad f and the operator is Hess f.
struct FieldProblem {
  std::string name;
  ManifoldTag manifold = ManifoldTag::Sphere;
  std::function<Mat(const Point &)> value;
  std::function<TangentOperator(const PointPtr &)> derivative;
  std::function<double(const Point &)> objective; // empty for non-gradient fields
  std::vector<RetractionKind> retractions;
  bool gradient_field = false;

  TangentVector field(const PointPtr &p) const { return {p, value(*p)}; }
  /// |grad f(p)| for gradient fields, |X(p)| otherwise.
  double stationarity(const Point &p) const { return norm(p, value(p)); }
};

double merit_value(const FieldProblem &problem, const Point &p);

/// grad phi(p) = nabla X(p)^* X(p).
Mat merit_gradient(const FieldProblem &problem, const PointPtr &p);

/// Same as merit_gradient, reusing an already evaluated X(p) and operator.
Mat merit_gradient(const TangentOperator &op, const Mat &x);

} // namespace rnewton
