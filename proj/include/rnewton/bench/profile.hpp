// Dolan-More performance profiles and per-epsilon robustness tables built
// from benchmark records.

#pragma once

#include "rnewton/bench/records.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rnewton::bench {

enum class Metric { CpuSeconds, Iters, FieldEvals };

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

class MismatchedProblemSets : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct PerformanceProfile {
  std::vector<double> tau_grid;             // increasing, starts at 1
  std::vector<std::string> solvers;         // in label order
  std::vector<std::string> problems;        // sorted problem ids
  std::vector<std::vector<double>> ratios;  // ratios[s][problem]; +inf on failure
  std::vector<std::vector<double>> curves;  // curves[s][t] = rho_s(tau_t)

  /// rho_s(tau) for an arbitrary tau >= 1.
  double rho(std::size_t solver, double tau) const;
};

/// rho_s(tau) = fraction of problems on which solver s has a metric ratio
/// to the per-problem best of at most tau. Unsolved runs get ratio +inf.
/// Solvers are keyed by BenchmarkRecord::solver_label and must all cover the
/// same problem ids.
PerformanceProfile performance_profile(const std::vector<BenchmarkRecord> &records,
                                       Metric metric);

/// (tau, solver, rho) rows.
void write_profile_csv(std::ostream &os, const PerformanceProfile &profile,
                       const std::string &config);

struct RobustnessCell {
  int solved = 0;
  int total = 0;
  double percent() const { return total == 0 ? 0.0 : 100.0 * solved / total; }
};

/// table[solver][epsilon] = solved / total.
using RobustnessTable = std::map<std::string, std::map<double, RobustnessCell>>;

RobustnessTable robustness_table(const std::vector<BenchmarkRecord> &records);

/// (solver, epsilon, solved, total, percent) rows.
void write_robustness_csv(std::ostream &os, const RobustnessTable &table,
                          const std::string &config);

} // namespace rnewton::bench
