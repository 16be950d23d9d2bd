#include "rnewton/bench/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

namespace rnewton::bench {

std::string_view to_string(Metric metric) {
  switch (metric) {
  case Metric::CpuSeconds:
    return "cpu_seconds";
  case Metric::Iters:
    return "iters";
  case Metric::FieldEvals:
    return "field_evals";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : {Metric::CpuSeconds, Metric::Iters, Metric::FieldEvals})
    if (to_string(m) == name)
      return m;
  return std::nullopt;
}

namespace {

double metric_of(const BenchmarkRecord &r, Metric metric) {
  switch (metric) {
  case Metric::CpuSeconds:
    return r.cpu_seconds;
  case Metric::Iters:
    return r.iters;
  case Metric::FieldEvals:
    return static_cast<double>(r.field_evals);
  }
  return 0.0;
}

} // namespace

double PerformanceProfile::rho(std::size_t solver, double tau) const {
  const auto &r = ratios.at(solver);
  if (r.empty())
    return 0.0;
  const auto hits = std::count_if(r.begin(), r.end(), [tau](double x) { return x <= tau; });
  return static_cast<double>(hits) / static_cast<double>(r.size());
}

PerformanceProfile performance_profile(const std::vector<BenchmarkRecord> &records,
                                       Metric metric) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // solver -> problem -> metric (inf if unsolved)
  std::map<std::string, std::map<std::string, double>> table;
  for (const auto &r : records) {
    auto &cell = table[r.solver_label()];
    if (cell.count(r.problem_id))
      throw MismatchedProblemSets("duplicate record for solver " + r.solver_label() +
                                  " on problem " + r.problem_id);
    cell[r.problem_id] = r.solved() ? metric_of(r, metric) : inf;
  }

  PerformanceProfile out;
  if (table.empty())
    return out;
  std::set<std::string> problems;
  for (const auto &[label, row] : table)
    for (const auto &[pid, _] : row)
      problems.insert(pid);
  for (const auto &[label, row] : table)
    if (row.size() != problems.size())
      throw MismatchedProblemSets("solver " + label + " does not cover every problem");
  out.problems.assign(problems.begin(), problems.end());

  std::map<std::string, double> best;
  for (const auto &pid : out.problems) {
    double b = inf;
    for (const auto &[label, row] : table)
      b = std::min(b, row.at(pid));
    best[pid] = b;
  }

  std::set<double> grid{1.0};
  for (const auto &[label, row] : table) {
    out.solvers.push_back(label);
    std::vector<double> ratios;
    for (const auto &pid : out.problems) {
      const double v = row.at(pid);
      const double b = best[pid];
      double ratio = inf;
      if (std::isfinite(v))
        ratio = (v <= b) ? 1.0 : (b > 0.0 ? v / b : inf);
      ratios.push_back(ratio);
      if (std::isfinite(ratio))
        grid.insert(ratio);
    }
    out.ratios.push_back(std::move(ratios));
  }
  out.tau_grid.assign(grid.begin(), grid.end());
  for (std::size_t s = 0; s < out.solvers.size(); ++s) {
    std::vector<double> curve;
    for (double tau : out.tau_grid)
      curve.push_back(out.rho(s, tau));
    out.curves.push_back(std::move(curve));
  }
  return out;
}

void write_profile_csv(std::ostream &os, const PerformanceProfile &profile,
                       const std::string &config) {
  os << '#' << config << '\n' << "tau,solver,rho\n";
  for (std::size_t s = 0; s < profile.solvers.size(); ++s)
    for (std::size_t t = 0; t < profile.tau_grid.size(); ++t)
      os << format_double(profile.tau_grid[t]) << ',' << profile.solvers[s] << ','
         << format_double(profile.curves[s][t]) << '\n';
}

RobustnessTable robustness_table(const std::vector<BenchmarkRecord> &records) {
  RobustnessTable table;
  for (const auto &r : records) {
    auto &cell = table[r.solver_label()][r.epsilon];
    ++cell.total;
    if (r.solved())
      ++cell.solved;
  }
  return table;
}

void write_robustness_csv(std::ostream &os, const RobustnessTable &table,
                          const std::string &config) {
  os << '#' << config << '\n' << "solver,epsilon,solved,total,percent\n";
  for (const auto &[label, row] : table)
    for (const auto &[eps, cell] : row)
      os << label << ',' << format_double(eps) << ',' << cell.solved << ',' << cell.total << ','
         << format_double(cell.percent()) << '\n';
}

} // namespace rnewton::bench
