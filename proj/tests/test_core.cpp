#include "families.hpp"
#include "oracles.hpp"

#include "rnewton/core.hpp"
#include "rnewton/spd.hpp"
#include "rnewton/sphere.hpp"
#include "rnewton/stiefel.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rnewton;

namespace {

Vec e(Index n, Index i) { return Vec::Unit(n, i); }

Mat scalar(double x) { return Mat::Constant(1, 1, x); }

TangentOperator identity_op(const PointPtr &p) {
  return TangentOperator{p, [](const Mat &v) { return v; }, true, {}};
}

TangentOperator zero_op(const PointPtr &p) {
  return TangentOperator{p, [](const Mat &v) { return Mat::Zero(v.rows(), v.cols()).eval(); },
                         true, {}};
}

// Sum of b b^T over the basis: the orthogonal projector onto the span.
Mat span_projector(const TangentBasis &basis) {
  const Mat &b0 = basis[0];
  Mat P = Mat::Zero(b0.size(), b0.size());
  for (const Mat &b : basis.vectors()) {
    const Vec f = Eigen::Map<const Vec>(b.data(), b.size());
    P += f * f.transpose();
  }
  return P;
}

} // namespace

TEST(Inner, SphereUnitVector) {
  const Point p = sphere::point(e(3, 0));
  EXPECT_DOUBLE_EQ(inner(p, e(3, 1), e(3, 1)), 1.0);
}

TEST(Inner, SpdScalarTraceForm) {
  const Point p = spd::point(scalar(3.0));
  EXPECT_NEAR(inner(p, scalar(2.0), scalar(2.0)), 4.0 / 9.0, 1e-15);
}

TEST(Inner, ZeroVectorGivesZero) {
  oracle::Probe probe(1);
  for (auto &c : oracle::random_cases(probe)) {
    const Mat u = oracle::random_tangent(probe, c.point);
    EXPECT_EQ(inner(c.point, u, Mat::Zero(u.rows(), u.cols())), 0.0) << c.name;
  }
}

TEST(Inner, SymmetricAndPositive) {
  oracle::Probe probe(2);
  for (auto &c : oracle::random_cases(probe)) {
    const Mat u = oracle::random_tangent(probe, c.point);
    const Mat v = oracle::random_tangent(probe, c.point);
    EXPECT_NEAR(inner(c.point, u, v), inner(c.point, v, u), 1e-12) << c.name;
    EXPECT_GT(inner(c.point, u, u), 0.0) << c.name;
  }
}

TEST(Inner, BaseMismatchThrows) {
  const auto p = share(sphere::point(e(3, 0)));
  const auto q = share(sphere::point(e(3, 1)));
  const TangentVector u{p, e(3, 1)};
  const TangentVector v{q, e(3, 2)};
  EXPECT_THROW(inner(u, v), BaseMismatch);
}

TEST(Inner, EqualBasesByValueAreAccepted) {
  const auto p = share(sphere::point(e(3, 0)));
  const auto q = share(sphere::point(e(3, 0)));
  EXPECT_DOUBLE_EQ(inner(TangentVector{p, e(3, 1)}, TangentVector{q, e(3, 1)}), 1.0);
}

TEST(TangentBasis, SphereCoordinatePlane) {
  const auto p = share(sphere::point(e(3, 0)));
  const TangentBasis basis = tangent_basis(p);
  ASSERT_EQ(basis.size(), 2);
  Mat expected = Mat::Identity(3, 3);
  expected(0, 0) = 0.0;
  EXPECT_LT((span_projector(basis) - expected).norm(), 1e-14);
}

TEST(TangentBasis, SpdScalarBasisIsThePoint) {
  const auto p = share(spd::point(scalar(5.0)));
  const TangentBasis basis = tangent_basis(p);
  ASSERT_EQ(basis.size(), 1);
  EXPECT_NEAR(basis[0](0, 0), 5.0, 1e-14);
  EXPECT_NEAR(inner(*p, basis[0], basis[0]), 1.0, 1e-14);
}

TEST(TangentBasis, StiefelSingleColumnIsSphere) {
  const auto p = share(stiefel::point(e(3, 0), e(2, 0)));
  const TangentBasis basis = tangent_basis(p);
  ASSERT_EQ(basis.size(), 3);
  Mat top = Mat::Zero(3, 3);
  for (const Mat &b : basis.vectors())
    top += b.topRows(3) * b.topRows(3).transpose();
  Mat expected = Mat::Identity(3, 3);
  expected(0, 0) = 0.0;
  EXPECT_LT((top - expected).norm(), 1e-14);
}

TEST(TangentBasis, OrthonormalWithManifoldDimension) {
  oracle::Probe probe(3);
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const TangentBasis basis = tangent_basis(p);
    ASSERT_EQ(basis.size(), manifold_dim(*p)) << c.name;
    for (Index i = 0; i < basis.size(); ++i) {
      EXPECT_TRUE(is_tangent(*p, basis[i], 1e-12)) << c.name;
      for (Index j = 0; j < basis.size(); ++j)
        EXPECT_NEAR(inner(*p, basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-10) << c.name;
    }
  }
}

TEST(TangentBasis, DimensionFormulas) {
  oracle::Probe probe(4);
  EXPECT_EQ(manifold_dim(sphere::point(probe.unit(7))), 6);
  // Per factor m p - p (p + 1) / 2: (5, 2) -> 7, (3, 2) -> 3.
  EXPECT_EQ(manifold_dim(stiefel::point(probe.frame(5, 2), probe.frame(3, 2))), 10);
  EXPECT_EQ(manifold_dim(spd::point(probe.spd(4))), 10);
}

TEST(TangentBasis, CountSurvivesRoundOffDrift) {
  oracle::Probe probe(5);
  Mat P = probe.frame(5, 2);
  Mat Q = probe.frame(3, 2);
  P += 1e-11 * probe.matrix(5, 2);
  Q += 1e-11 * probe.matrix(3, 2);
  const auto p = share(stiefel::point(P, Q));
  EXPECT_EQ(tangent_basis(p).size(), 10);
}

TEST(TangentBasis, CoordinatesRoundTrip) {
  oracle::Probe probe(6);
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const TangentBasis basis = tangent_basis(p);
    const Mat v = oracle::random_tangent(probe, *p);
    const Vec coords = basis.coordinates(v);
    EXPECT_LT(oracle::rel_err(basis.combine(coords), v), 1e-12) << c.name;
    EXPECT_NEAR(coords.norm(), norm(*p, v), 1e-12) << c.name;
  }
}

TEST(OperatorToMatrix, IdentityGivesIdentity) {
  oracle::Probe probe(7);
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const TangentBasis basis = tangent_basis(p);
    const Mat M = operator_to_matrix(identity_op(p), basis);
    EXPECT_LT((M - Mat::Identity(basis.size(), basis.size())).norm(), 1e-10) << c.name;
  }
}

TEST(OperatorToMatrix, RayleighHessianAtEigenvector) {
  // A = diag(1, 2, 3), p = e1: Hess has eigenvalues 2 (lambda_j - lambda_1).
  const Vec lambda = Vec::LinSpaced(3, 1.0, 3.0);
  const auto problem = sphere::make_problem(sphere::RayleighProblem{lambda.asDiagonal()});
  const auto p = share(sphere::point(e(3, 0)));
  const Mat M = operator_to_matrix(problem.derivative(p), tangent_basis(p));
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  EXPECT_NEAR(es.eigenvalues()(0), 2.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), 4.0, 1e-14);
  EXPECT_LT((M - M.transpose()).norm(), 1e-14);
}

TEST(OperatorToMatrix, SpdScalarHessian) {
  const double x = 3.0;
  const auto problem = spd::make_problem(spd::Objective::F1);
  const auto p = share(spd::point(scalar(x)));
  const Mat M = operator_to_matrix(problem.derivative(p), tangent_basis(p));
  ASSERT_EQ(M.rows(), 1);
  EXPECT_NEAR(M(0, 0), 1.0 / x, 1e-15);
}

TEST(OperatorToMatrix, AdjointMatchesTransposeProbes) {
  oracle::Probe probe(8);
  for (int k = 0; k < 100; ++k) {
    auto problem = oracle::random_nc(probe, 4);
    const auto p = share(sphere::point(probe.unit(5)));
    const auto op = problem.derivative(p);
    const TangentBasis basis = tangent_basis(p);
    const Mat u = oracle::random_tangent(probe, *p);
    const Mat v = oracle::random_tangent(probe, *p);
    const double lhs = inner(*p, u, op(v));
    const double rhs = inner(*p, adjoint_apply(op, basis, u), v);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(SolveNewtonSystem, ZeroRhsGivesZero) {
  oracle::Probe probe(9);
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const auto v = solve_newton_system(identity_op(p), Mat::Zero(p->ambient.rows(),
                                                                  p->ambient.cols()));
    ASSERT_TRUE(v) << c.name;
    EXPECT_EQ(v->norm(), 0.0) << c.name;
  }
}

TEST(SolveNewtonSystem, SpdScalarHandSolve) {
  const auto problem = spd::make_problem(spd::Objective::F1);
  const auto p = share(spd::point(scalar(3.0)));
  for (bool structured : {true, false}) {
    SolveOptions opts;
    opts.use_structured = structured;
    const auto v = solve_newton_system(problem.derivative(p), problem.value(*p), opts);
    ASSERT_TRUE(v);
    EXPECT_NEAR((*v)(0, 0), -6.0, 1e-13);
  }
}

TEST(SolveNewtonSystem, ZeroOperatorIsSingular) {
  const auto p = share(sphere::point(e(3, 0)));
  EXPECT_FALSE(solve_newton_system(zero_op(p), e(3, 1)));
}

TEST(SolveNewtonSystem, NearlySingularRejectedByPivot) {
  // Rank-one operator v -> <b, v> b on the 2-dim tangent plane.
  const auto p = share(sphere::point(e(3, 0)));
  const Vec b = e(3, 1);
  const TangentOperator op{p, [b](const Mat &v) { return (b * b.dot(v.col(0))).eval(); },
                           true, {}};
  EXPECT_FALSE(solve_newton_system(op, e(3, 2)));
}

TEST(SolveNewtonSystem, StructuredAndDenseAgree) {
  oracle::Probe probe(10);
  for (auto which : {spd::Objective::F1, spd::Objective::F2}) {
    const auto problem = spd::make_problem(which);
    const auto p = share(spd::point(probe.spd(5)));
    const Mat X = problem.value(*p);
    SolveOptions dense;
    dense.use_structured = false;
    const auto a = solve_newton_system(problem.derivative(p), X);
    const auto b = solve_newton_system(problem.derivative(p), X, dense);
    ASSERT_TRUE(a && b);
    EXPECT_LT(oracle::rel_err(*a, *b), 1e-10);
  }
}

TEST(SolveNewtonSystem, TangentVectorOverloadChecksBase) {
  const auto p = share(sphere::point(e(3, 0)));
  const auto q = share(sphere::point(e(3, 1)));
  EXPECT_THROW(solve_newton_system(identity_op(p), TangentVector{q, e(3, 0)}), BaseMismatch);
  const auto v = solve_newton_system(identity_op(p), TangentVector{p, e(3, 1)});
  ASSERT_TRUE(v);
  EXPECT_LT((v->ambient + e(3, 1)).norm(), 1e-15);
}

TEST(MeritValue, ZeroAtSingularity) {
  const auto problem = spd::make_problem(spd::Objective::F1);
  EXPECT_EQ(merit_value(problem, spd::point(Mat::Identity(3, 3))), 0.0);
}

TEST(MeritValue, RayleighHandValue) {
  const Mat A = Vec::LinSpaced(2, 1.0, 2.0).asDiagonal();
  const auto problem = sphere::make_problem(sphere::RayleighProblem{A});
  const Point p = sphere::point(Vec::Constant(2, 1.0 / std::sqrt(2.0)));
  EXPECT_NEAR(merit_value(problem, p), 0.5, 1e-15);
}

TEST(MeritValue, SpdScalarHandValue) {
  const auto problem = spd::make_problem(spd::Objective::F1);
  EXPECT_NEAR(merit_value(problem, spd::point(scalar(3.0))), 2.0 / 9.0, 1e-15);
}

TEST(MeritGradient, ZeroAtSingularity) {
  const auto problem = sphere::make_problem(
      sphere::RayleighProblem{Vec::LinSpaced(3, 1.0, 3.0).asDiagonal()});
  const auto p = share(sphere::point(e(3, 1)));
  EXPECT_EQ(merit_gradient(problem, p).norm(), 0.0);
}

TEST(MeritGradient, SpdScalarHandValue) {
  const auto problem = spd::make_problem(spd::Objective::F1);
  const auto p = share(spd::point(scalar(3.0)));
  EXPECT_NEAR(merit_gradient(problem, p)(0, 0), 2.0 / 3.0, 1e-15);
}

TEST(MeritGradient, SelfAdjointShortcutMatchesTranspose) {
  oracle::Probe probe(11);
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const auto op = c.problem.derivative(p);
    const Mat X = c.problem.value(*p);
    const Mat via_transpose = adjoint_apply(op, tangent_basis(p), X);
    EXPECT_LT(oracle::rel_err(merit_gradient(op, X), via_transpose), 1e-10) << c.name;
  }
}

TEST(MeritGradient, MatchesFiniteDifferenceAlongRetraction) {
  oracle::Probe probe(12);
  const double h = 1e-5;
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const Mat g = merit_gradient(c.problem, p);
    for (int k = 0; k < 20; ++k) {
      const Mat u = oracle::random_tangent(probe, *p);
      const double fd = oracle::central(
          [&](double t) { return merit_value(c.problem, *retract(c.retraction, *p, t * u)); }, h);
      const double an = inner(*p, g, u);
      EXPECT_LE(std::abs(fd - an) / std::max(1.0, std::abs(an)), 1e-5) << c.name;
    }
  }
}

TEST(MeritGradient, NewtonDescentIdentity) {
  oracle::Probe probe(13);
  for (int k = 0; k < 20; ++k)
    for (auto &c : oracle::random_cases(probe)) {
      const auto p = share(c.point);
      const auto op = c.problem.derivative(p);
      const Mat X = c.problem.value(*p);
      const auto v = solve_newton_system(op, X);
      ASSERT_TRUE(v) << c.name;
      const double lhs = inner(*p, merit_gradient(op, X), *v);
      const double x2 = inner(*p, X, X);
      EXPECT_LE(std::abs(lhs + x2) / x2, 1e-8) << c.name;
    }
}

TEST(MeritGradient, SafeguardIsDescent) {
  oracle::Probe probe(14);
  for (auto &c : oracle::random_cases(probe)) {
    const auto p = share(c.point);
    const Mat g = merit_gradient(c.problem, p);
    EXPECT_LT(inner(*p, g, -g), 0.0) << c.name;
  }
}

TEST(Retraction, NamesRoundTrip) {
  for (auto tag : {ManifoldTag::Sphere, ManifoldTag::StiefelProduct, ManifoldTag::SpdCone})
    for (auto kind : retractions_for(tag)) {
      EXPECT_EQ(parse_retraction(to_string(kind)), kind);
      EXPECT_EQ(manifold_of(kind), tag);
    }
  EXPECT_FALSE(parse_retraction("no-such-retraction"));
}

TEST(Retraction, WrongManifoldThrows) {
  const Point p = sphere::point(e(3, 0));
  EXPECT_THROW(retract(RetractionKind::SpdFirstOrder, p, e(3, 1)), std::invalid_argument);
}

TEST(Retraction, CurveMatchesPointwiseRetraction) {
  oracle::Probe probe(15);
  const Point P = spd::point(probe.spd(4));
  const Mat V = 3.0 * oracle::random_tangent(probe, P);
  for (auto kind : retractions_for(ManifoldTag::SpdCone)) {
    const auto curve = retraction_curve(kind, P, V);
    for (double alpha : {1.0, 0.5, 0.125, 1.0 / 1024}) {
      const auto a = curve(alpha);
      const auto b = retract(kind, P, alpha * V);
      ASSERT_EQ(a.has_value(), b.has_value()) << to_string(kind);
      if (a) {
        EXPECT_LT(oracle::rel_err(a->ambient, b->ambient), 1e-12) << to_string(kind);
      }
    }
  }
}
