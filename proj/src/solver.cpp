#include "rnewton/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace rnewton {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
  case Algorithm::Pure:
    return "pure";
  case Algorithm::Damped:
    return "damped";
  case Algorithm::ModifiedDamped:
    return "modified-damped";
  }
  return "unknown";
}

std::string_view to_string(DirectionKind kind) {
  return kind == DirectionKind::Newton ? "newton" : "safeguard";
}

std::string_view to_string(Status status) {
  switch (status) {
  case Status::Converged:
    return "Converged";
  case Status::SmallStep:
    return "SmallStep";
  case Status::MaxIter:
    return "MaxIter";
  case Status::SingularStop:
    return "SingularStop";
  case Status::CriticalOfMerit:
    return "CriticalOfMerit";
  }
  return "unknown";
}

std::optional<Status> parse_status(std::string_view name) {
  for (Status s : {Status::Converged, Status::SmallStep, Status::MaxIter, Status::SingularStop,
                   Status::CriticalOfMerit})
    if (to_string(s) == name)
      return s;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(sigma > 0.0 && sigma < 0.5))
    throw std::invalid_argument("sigma must lie in (0, 1/2)");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must lie in [0, 1]");
  if (!(stat_tol > 0.0) || !(min_step > 0.0) || max_iter < 0)
    throw std::invalid_argument("tolerances must be positive");
}

std::optional<Mat> newton_direction(const FieldProblem &problem, const PointPtr &p,
                                    const SolveOptions &opts) {
  return solve_newton_system(problem.derivative(p), problem.value(*p), opts);
}

bool angle_test(const Point &p, const Mat &gradphi, const Mat &v, double theta) {
  const double gn = norm(p, gradphi);
  const double vn = norm(p, v);
  if (gn == 0.0 || vn == 0.0)
    return true;
  return inner(p, gradphi, v) <= -theta * gn * vn;
}

Mat safeguard_direction(const FieldProblem &problem, const PointPtr &p) {
  return -merit_gradient(problem, p);
}

std::optional<ArmijoStep> armijo(const FieldProblem &problem, RetractionKind retraction,
                                 const Point &p, const Mat &v, double merit_p, double slope,
                                 double sigma, double min_step, int *trials) {
  int evals = 0;
  std::optional<ArmijoStep> out;
  const RetractionCurve curve = retraction_curve(retraction, p, v);
  for (double alpha = 1.0; alpha >= min_step; alpha *= 0.5) {
    auto q = curve(alpha);
    if (!q)
      continue;
    const double mq = merit_value(problem, *q);
    ++evals;
    if (std::isfinite(mq) && mq <= merit_p + sigma * alpha * slope) {
      out = ArmijoStep{alpha, std::move(*q), mq, evals};
      break;
    }
  }
  if (trials)
    *trials = evals;
  return out;
}

std::optional<ArmijoStep> armijo(const FieldProblem &problem, RetractionKind retraction,
                                 const PointPtr &p, const Mat &v, double sigma, double min_step) {
  const double slope = inner(*p, merit_gradient(problem, p), v);
  return armijo(problem, retraction, *p, v, merit_value(problem, *p), slope, sigma, min_step);
}

RunResult run(const FieldProblem &problem, const SolverConfig &config, const Point &p0) {
  config.validate();
  if (manifold_of(config.retraction) != problem.manifold)
    throw std::invalid_argument("retraction does not match the problem's manifold");

  RunResult result;
  IterationTrace &trace = result.trace;
  PointPtr p = share(p0);
  std::int64_t evals = 0;
  if (config.keep_iterates)
    result.iterates.push_back(*p);

  for (int k = 0;; ++k) {
    const Mat X = problem.value(*p);
    ++evals;
    const double stat = norm(*p, X);
    const double merit = 0.5 * stat * stat;
    trace.final_merit = merit;
    trace.final_stationarity = stat;
    trace.field_evals = evals;

    if (!std::isfinite(stat)) {
      trace.status = Status::SmallStep;
      break;
    }
    if (stat < config.stat_tol) {
      trace.status = Status::Converged;
      break;
    }
    if (k >= config.max_iter) {
      trace.status = Status::MaxIter;
      break;
    }

    const TangentOperator op = problem.derivative(p);
    std::optional<Mat> newton = solve_newton_system(op, X, config.linear);

    IterationRecord rec;
    rec.merit = merit;
    rec.stationarity = stat;

    if (config.algorithm == Algorithm::Pure) {
      if (!newton) {
        trace.status = Status::SingularStop;
        break;
      }
      auto q = retract(config.retraction, *p, *newton);
      if (!q) {
        trace.status = Status::SmallStep;
        break;
      }
      rec.alpha = 1.0;
      rec.direction = DirectionKind::Newton;
      rec.field_evals_cum = evals;
      trace.steps.push_back(rec);
      p = share(std::move(*q));
      if (config.keep_iterates)
        result.iterates.push_back(*p);
      continue;
    }

    const Mat g = merit_gradient(op, X);
    Mat v;
    bool use_newton = false;
    if (newton) {
      // In exact arithmetic <g, v> = -|X|^2 < 0; a non-negative slope means
      // the computed direction is unusable for the line search.
      const bool descent = inner(*p, g, *newton) < 0.0;
      use_newton = descent && (config.algorithm == Algorithm::Damped ||
                               angle_test(*p, g, *newton, config.theta));
    }
    if (use_newton) {
      v = std::move(*newton);
      rec.direction = DirectionKind::Newton;
    } else {
      v = -g;
      rec.direction = DirectionKind::Safeguard;
      if (norm(*p, v) == 0.0) {
        trace.status = Status::CriticalOfMerit;
        break;
      }
    }

    const double slope = inner(*p, g, v);
    int trials = 0;
    auto step = armijo(problem, config.retraction, *p, v, merit, slope, config.sigma,
                       config.min_step, &trials);
    evals += trials;
    trace.field_evals = evals;
    if (!step) {
      trace.status = Status::SmallStep;
      break;
    }
    rec.alpha = step->alpha;
    rec.field_evals_cum = evals;
    trace.steps.push_back(rec);
    p = share(std::move(step->next));
    if (config.keep_iterates)
      result.iterates.push_back(*p);
  }

  result.final_point = *p;
  return result;
}

} // namespace rnewton
