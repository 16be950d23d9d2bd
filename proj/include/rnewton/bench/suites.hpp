// Experiment runner: expands a suite configuration into instances, runs
// every configured solver on each, and collects one BenchmarkRecord per
// (instance, solver) pair in a fixed order.

#pragma once

#include "rnewton/bench/records.hpp"
#include "rnewton/solver.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rnewton::bench {

enum class Suite { SphereNC, Rayleigh, Tsvd, SpdF1, SpdF2 };

std::string_view to_string(Suite suite);
std::optional<Suite> parse_suite(std::string_view name);

struct SolverSpec {
  Algorithm algorithm = Algorithm::Damped;
  RetractionKind retraction = RetractionKind::SphereProj;
  double theta = 0.0;
};

struct SuiteConfig {
  Suite suite = Suite::SphereNC;
  std::vector<Index> dims;                       // sphere-nc, rayleigh, spd
  std::vector<std::array<Index, 3>> tsvd_dims;   // (m, n, p)
  std::vector<int> families;                     // rayleigh, spd
  std::vector<double> epsilons;                  // tsvd
  std::vector<std::uint64_t> seeds;
  std::vector<SolverSpec> solvers;
  double sigma = 1e-3;
  double stat_tol = 1e-6;
  double min_step = 1e-10;
  int max_iter = 2000;
};

/// Desk-scale defaults, or the dimensions of the original experiments when
/// `paper_scale` is set.
SuiteConfig default_suite_config(Suite suite, bool paper_scale = false);

/// One-line description of the resolved configuration (for the '#' echo line).
std::string describe(const SuiteConfig &config);

/// Everything the runner knows about one run, for callers that need more than
/// the record (traces, final points).
struct RunContext {
  const BenchmarkRecord &record;
  const FieldProblem &problem;
  const RunResult &result;
};

using RunObserver = std::function<void(const RunContext &)>;

/// Records are ordered by instance (dims, family, epsilon, seed, in config
/// order), then by solver. Failures are reported through the status column.
std::vector<BenchmarkRecord> run_suite(const SuiteConfig &config,
                                       const RunObserver &observer = {});

} // namespace rnewton::bench
