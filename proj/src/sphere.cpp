#include "rnewton/sphere.hpp"

#include <cmath>

namespace rnewton::sphere {

Point point(const Vec &x) {
  Point p{ManifoldTag::Sphere, x, 0};
  require_on_manifold(p);
  return p;
}

Vec project_tangent(const Vec &p, const Vec &w) { return w - p.dot(w) * p; }

Vec retract(RetractionKind kind, const Vec &p, const Vec &v) {
  switch (kind) {
  case RetractionKind::SphereExp: {
    const double t = v.norm();
    // Also covers v = 0, where sin(t) v / t is 0/0.
    if (t < 1e-14)
      return p;
    return std::cos(t) * p + (std::sin(t) / t) * v;
  }
  case RetractionKind::SphereProj: {
    if (v.isZero(0.0))
      return p;
    Vec q = p + v;
    return q / q.norm();
  }
  default:
    throw std::invalid_argument("not a sphere retraction");
  }
}

Vec field_nc(const NonconservativeProblem &problem, const Vec &p) {
  const Vec w = problem.Q * (p - problem.pbar);
  return w - p.dot(w) * p;
}

Vec field_nc_operator(const NonconservativeProblem &problem, const Vec &p, const Vec &v) {
  const double c = p.dot(problem.Q * (p - problem.pbar));
  return project_tangent(p, problem.Q * v) - c * v;
}

double rayleigh_value(const RayleighProblem &problem, const Vec &p) {
  return p.dot(problem.A * p);
}

Vec rayleigh_grad(const RayleighProblem &problem, const Vec &p) {
  return 2.0 * project_tangent(p, problem.A * p);
}

Vec rayleigh_hess(const RayleighProblem &problem, const Vec &p, const Vec &v) {
  return 2.0 * project_tangent(p, problem.A * v) - 2.0 * p.dot(problem.A * p) * v;
}

namespace {

void validate(const NonconservativeProblem &problem) {
  const Index n = problem.Q.rows();
  if (problem.Q.cols() != n || problem.pbar.size() != n)
    throw std::invalid_argument("nonconservative problem: dimension mismatch");
  if ((problem.Q + problem.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("nonconservative problem: Q must be skew-symmetric");
  if (std::abs(problem.pbar.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("nonconservative problem: pbar must have unit norm");
}

} // namespace

FieldProblem make_problem(NonconservativeProblem problem) {
  validate(problem);
  auto data = std::make_shared<const NonconservativeProblem>(std::move(problem));
  FieldProblem fp;
  fp.name = "sphere-nc";
  fp.manifold = ManifoldTag::Sphere;
  fp.value = [data](const Point &p) -> Mat { return field_nc(*data, p.ambient.col(0)); };
  fp.derivative = [data](const PointPtr &p) {
    TangentOperator op;
    op.base = p;
    op.apply_ambient = [data, p](const Mat &v) -> Mat {
      return field_nc_operator(*data, p->ambient.col(0), v.col(0));
    };
    return op;
  };
  fp.retractions = retractions_for(ManifoldTag::Sphere);
  fp.gradient_field = false;
  return fp;
}

FieldProblem make_problem(RayleighProblem problem) {
  if (problem.A.rows() != problem.A.cols() ||
      (problem.A - problem.A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("Rayleigh problem: A must be square and symmetric");
  auto data = std::make_shared<const RayleighProblem>(std::move(problem));
  FieldProblem fp;
  fp.name = "rayleigh";
  fp.manifold = ManifoldTag::Sphere;
  fp.value = [data](const Point &p) -> Mat { return rayleigh_grad(*data, p.ambient.col(0)); };
  fp.derivative = [data](const PointPtr &p) {
    TangentOperator op;
    op.base = p;
    op.self_adjoint = true;
    // Cache A p and p^T A p: each application is then one matrix-vector product.
    const Vec x = p->ambient.col(0);
    const double rq = x.dot(data->A * x);
    op.apply_ambient = [data, x, rq](const Mat &v) -> Mat {
      const Vec Av = data->A * v.col(0);
      return 2.0 * (Av - x.dot(Av) * x) - 2.0 * rq * v.col(0);
    };
    return op;
  };
  fp.objective = [data](const Point &p) { return rayleigh_value(*data, p.ambient.col(0)); };
  fp.retractions = retractions_for(ManifoldTag::Sphere);
  fp.gradient_field = true;
  return fp;
}

} // namespace rnewton::sphere
