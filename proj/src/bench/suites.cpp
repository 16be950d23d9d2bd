#include "rnewton/bench/suites.hpp"

#include "rnewton/bench/generators.hpp"
#include "rnewton/spd.hpp"

#include <chrono>
#include <sstream>

namespace rnewton::bench {

std::string_view to_string(Suite suite) {
  switch (suite) {
  case Suite::SphereNC:
    return "sphere-nc";
  case Suite::Rayleigh:
    return "rayleigh";
  case Suite::Tsvd:
    return "tsvd";
  case Suite::SpdF1:
    return "spd-f1";
  case Suite::SpdF2:
    return "spd-f2";
  }
  return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : {Suite::SphereNC, Suite::Rayleigh, Suite::Tsvd, Suite::SpdF1, Suite::SpdF2})
    if (to_string(s) == name)
      return s;
  return std::nullopt;
}

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < count; ++s)
    out.push_back(s);
  return out;
}

std::vector<SolverSpec> all_retractions(Algorithm algorithm, ManifoldTag tag, double theta) {
  std::vector<SolverSpec> out;
  for (RetractionKind k : retractions_for(tag))
    out.push_back({algorithm, k, theta});
  return out;
}

template <class T> std::string join(const std::vector<T> &xs) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < xs.size(); ++i)
    ss << (i ? ";" : "") << xs[i];
  return ss.str();
}

struct Instance {
  std::string problem_id;
  std::string family;
  std::string dims;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  FieldProblem problem;
  Point p0;
};

std::vector<Instance> expand(const SuiteConfig &config) {
  std::vector<Instance> out;
  switch (config.suite) {
  case Suite::SphereNC:
    for (Index n : config.dims)
      for (auto seed : config.seeds) {
        auto inst = gen_sphere_nc(n, seed);
        Instance I;
        I.dims = std::to_string(n);
        I.family = "nc";
        I.seed = seed;
        I.problem_id = "sphere-nc/n=" + I.dims + "/seed=" + std::to_string(seed);
        I.problem = sphere::make_problem(std::move(inst.problem));
        I.p0 = std::move(inst.p0);
        out.push_back(std::move(I));
      }
    break;
  case Suite::Rayleigh:
    for (Index n : config.dims)
      for (int family : config.families)
        for (auto seed : config.seeds) {
          auto inst = gen_rayleigh(family, n, seed);
          Instance I;
          I.dims = std::to_string(inst.problem.A.rows());
          I.family = std::to_string(family);
          I.seed = seed;
          I.problem_id = "rayleigh/family=" + I.family + "/n=" + std::to_string(n) +
                         "/seed=" + std::to_string(seed);
          I.problem = sphere::make_problem(std::move(inst.problem));
          I.p0 = std::move(inst.p0);
          out.push_back(std::move(I));
        }
    break;
  case Suite::Tsvd:
    for (const auto &d : config.tsvd_dims)
      for (double eps : config.epsilons)
        for (auto seed : config.seeds) {
          auto inst = gen_tsvd(d[0], d[1], d[2], seed, eps);
          Instance I;
          I.dims = std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
          I.family = "tsvd";
          I.seed = seed;
          I.epsilon = eps;
          I.problem_id = "tsvd/" + I.dims + "/eps=" + format_double(eps) +
                         "/seed=" + std::to_string(seed);
          I.problem = stiefel::make_problem(std::move(inst.problem));
          I.p0 = std::move(inst.x0);
          out.push_back(std::move(I));
        }
    break;
  case Suite::SpdF1:
  case Suite::SpdF2: {
    const auto which = config.suite == Suite::SpdF1 ? spd::Objective::F1 : spd::Objective::F2;
    for (Index n : config.dims)
      for (int family : config.families)
        for (auto seed : config.seeds) {
          auto start = gen_spd_start(family, n, seed);
          Instance I;
          I.dims = std::to_string(start.P0.rows());
          I.family = std::to_string(family);
          I.seed = seed;
          I.problem_id = std::string(to_string(config.suite)) + "/family=" + I.family +
                         "/n=" + std::to_string(n) + "/seed=" + std::to_string(seed);
          if (start.shift > 0.0)
            I.problem_id += "/shift=" + format_double(start.shift);
          I.problem = spd::make_problem(which);
          I.p0 = Point{ManifoldTag::SpdCone, std::move(start.P0), 0};
          out.push_back(std::move(I));
        }
    break;
  }
  }
  return out;
}

} // namespace

SuiteConfig default_suite_config(Suite suite, bool paper_scale) {
  SuiteConfig c;
  c.suite = suite;
  switch (suite) {
  case Suite::SphereNC:
    c.dims = paper_scale ? std::vector<Index>{2, 50, 500, 1000} : std::vector<Index>{2, 50};
    c.seeds = paper_scale ? seed_range(1) : seed_range(10);
    c.solvers = all_retractions(Algorithm::Damped, ManifoldTag::Sphere, 0.0);
    break;
  case Suite::Rayleigh:
    c.dims = paper_scale ? std::vector<Index>{500, 750, 1000, 1250, 1500}
                         : std::vector<Index>{100, 200};
    c.families = {1, 2, 3, 4, 5};
    c.seeds = paper_scale ? seed_range(10) : seed_range(5);
    c.solvers = all_retractions(Algorithm::Damped, ManifoldTag::Sphere, 0.0);
    break;
  case Suite::Tsvd:
    c.tsvd_dims = {{5, 3, 2}, {7, 5, 2}, {10, 5, 3}, {20, 10, 3}};
    c.epsilons = {1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3};
    c.seeds = seed_range(10);
    c.solvers = all_retractions(Algorithm::Pure, ManifoldTag::StiefelProduct, 0.0);
    for (auto s : all_retractions(Algorithm::ModifiedDamped, ManifoldTag::StiefelProduct, 0.9))
      c.solvers.push_back(s);
    break;
  case Suite::SpdF1:
  case Suite::SpdF2:
    if (paper_scale)
      for (Index n = 100; n <= 1000; n += 100)
        c.dims.push_back(n);
    else
      c.dims = {10, 50, 100};
    c.families = {1, 2, 3, 4, 5};
    c.seeds = paper_scale ? seed_range(1) : seed_range(5);
    c.solvers = all_retractions(Algorithm::Damped, ManifoldTag::SpdCone, 0.0);
    for (auto s : all_retractions(Algorithm::ModifiedDamped, ManifoldTag::SpdCone, 0.9999))
      c.solvers.push_back(s);
    break;
  }
  return c;
}

std::string describe(const SuiteConfig &config) {
  std::ostringstream ss;
  ss << " suite=" << to_string(config.suite);
  if (!config.dims.empty())
    ss << " dims=" << join(config.dims);
  if (!config.tsvd_dims.empty()) {
    std::vector<std::string> d;
    for (const auto &t : config.tsvd_dims)
      d.push_back(std::to_string(t[0]) + "x" + std::to_string(t[1]) + "x" + std::to_string(t[2]));
    ss << " dims=" << join(d);
  }
  if (!config.families.empty())
    ss << " families=" << join(config.families);
  if (!config.epsilons.empty()) {
    std::vector<std::string> e;
    for (double x : config.epsilons)
      e.push_back(format_double(x));
    ss << " epsilons=" << join(e);
  }
  ss << " seeds=" << join(config.seeds);
  std::vector<std::string> solvers;
  for (const auto &s : config.solvers)
    solvers.push_back("alg" + std::to_string(static_cast<int>(s.algorithm)) + ":" +
                      std::string(to_string(s.retraction)) + ":theta=" + format_double(s.theta));
  ss << " solvers=" << join(solvers) << " sigma=" << format_double(config.sigma)
     << " stat_tol=" << format_double(config.stat_tol)
     << " min_step=" << format_double(config.min_step) << " max_iter=" << config.max_iter;
  return ss.str();
}

std::vector<BenchmarkRecord> run_suite(const SuiteConfig &config, const RunObserver &observer) {
  std::vector<BenchmarkRecord> records;
  if (config.solvers.empty())
    return records;
  const ManifoldTag tag = config.suite == Suite::SphereNC || config.suite == Suite::Rayleigh
                              ? ManifoldTag::Sphere
                          : config.suite == Suite::Tsvd ? ManifoldTag::StiefelProduct
                                                        : ManifoldTag::SpdCone;
  for (const auto &s : config.solvers)
    if (manifold_of(s.retraction) != tag)
      throw std::invalid_argument("retraction " + std::string(to_string(s.retraction)) +
                                  " does not apply to suite " +
                                  std::string(to_string(config.suite)));

  for (const auto &inst : expand(config)) {
    for (const auto &s : config.solvers) {
      SolverConfig sc;
      sc.algorithm = s.algorithm;
      sc.retraction = s.retraction;
      sc.theta = s.theta;
      sc.sigma = config.sigma;
      sc.stat_tol = config.stat_tol;
      sc.min_step = config.min_step;
      sc.max_iter = config.max_iter;

      const auto t0 = std::chrono::steady_clock::now();
      RunResult result = run(inst.problem, sc, inst.p0);
      const auto t1 = std::chrono::steady_clock::now();

      BenchmarkRecord r;
      r.problem_id = inst.problem_id;
      r.manifold = std::string(to_string(tag));
      r.family = inst.family;
      r.dims = inst.dims;
      r.seed = inst.seed;
      r.epsilon = inst.epsilon;
      r.algorithm = static_cast<int>(s.algorithm);
      r.retraction = std::string(to_string(s.retraction));
      r.theta = s.theta;
      r.sigma = config.sigma;
      r.iters = result.trace.iterations();
      r.field_evals = result.trace.field_evals;
      r.cpu_seconds = std::chrono::duration<double>(t1 - t0).count();
      r.status = std::string(to_string(result.trace.status));
      r.final_merit = result.trace.final_merit;
      r.final_stationarity = result.trace.final_stationarity;
      if (observer)
        observer(RunContext{r, inst.problem, result});
      records.push_back(std::move(r));
    }
  }
  return records;
}

} // namespace rnewton::bench
