/** Newton-type methods for finding a singularity X(p) = 0 of a vector field
 * on a Riemannian manifold:
 *
 *  - Pure: p_{k+1} = R_{p_k}(v_k) with v_k solving X(p_k) + nabla X(p_k) v = 0;
 *    stops if the Newton system is singular.
 *  - Damped: Newton direction when it exists, otherwise -grad phi; step size
 *    from an Armijo rule on phi(p) = 1/2 |X(p)|^2.
 *  - ModifiedDamped: as Damped, but the Newton direction is only used when it
 *    satisfies the angle condition
 *        <grad phi, v> <= -theta |grad phi| |v|.
 */

#pragma once

#include "rnewton/core.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace rnewton {

enum class Algorithm { Pure = 1, Damped = 2, ModifiedDamped = 3 };

enum class DirectionKind { Newton, Safeguard };

enum class Status { Converged, SmallStep, MaxIter, SingularStop, CriticalOfMerit };

std::string_view to_string(Algorithm algorithm);
std::string_view to_string(DirectionKind kind);
std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::ModifiedDamped;
  RetractionKind retraction = RetractionKind::SphereProj;
  double sigma = 1e-3;
  double theta = 0.0;
  double stat_tol = 1e-6;
  double min_step = 1e-10;
  int max_iter = 2000;
  SolveOptions linear{};
  /// Store every iterate in the result (memory grows with max_iter).
  bool keep_iterates = false;

  /// Throws std::invalid_argument on an out-of-range parameter.
  void validate() const;
};

/// One accepted step p_k -> p_{k+1}. merit and stationarity are measured at
/// p_k; field_evals_cum counts all evaluations of X (and of phi inside the
/// line search) up to and including this step.
struct IterationRecord {
  double merit = 0.0;
  double stationarity = 0.0;
  double alpha = 0.0;
  DirectionKind direction = DirectionKind::Newton;
  std::int64_t field_evals_cum = 0;
};

struct IterationTrace {
  std::vector<IterationRecord> steps;
  Status status = Status::MaxIter;
  double final_merit = 0.0;
  double final_stationarity = 0.0;
  std::int64_t field_evals = 0;

  int iterations() const { return static_cast<int>(steps.size()); }
};

struct RunResult {
  IterationTrace trace;
  Point final_point;
  std::vector<Point> iterates; // p_0, p_1, ... when keep_iterates is set
};

/// Solution of the Newton equation at p, or nullopt if it is singular.
std::optional<Mat> newton_direction(const FieldProblem &problem, const PointPtr &p,
                                    const SolveOptions &opts = {});

/// <g, v> <= -theta |g| |v| under the metric at p. True when g or v is zero.
bool angle_test(const Point &p, const Mat &gradphi, const Mat &v, double theta);

/// -grad phi(p).
Mat safeguard_direction(const FieldProblem &problem, const PointPtr &p);

struct ArmijoStep {
  double alpha = 1.0;
  Point next;
  double merit_next = 0.0;
  int trials = 0; // merit evaluations performed
};

/// Largest alpha = 2^-j, j = 0, 1, ..., with
///   phi(R_p(alpha v)) <= phi(p) + sigma alpha <grad phi(p), v>.
/// Infeasible retractions count as failed trials without a merit evaluation.
/// Returns nullopt once alpha < min_step; `trials` still reports the work
/// done through the out-parameter.
std::optional<ArmijoStep> armijo(const FieldProblem &problem, RetractionKind retraction,
                                 const Point &p, const Mat &v, double merit_p, double slope,
                                 double sigma, double min_step, int *trials = nullptr);

/// Convenience form that evaluates phi(p) and <grad phi(p), v> itself.
std::optional<ArmijoStep> armijo(const FieldProblem &problem, RetractionKind retraction,
                                 const PointPtr &p, const Mat &v, double sigma, double min_step);

RunResult run(const FieldProblem &problem, const SolverConfig &config, const Point &p0);

} // namespace rnewton
