// Command-line driver: runs benchmark suites to a records CSV and turns
// records into performance profiles and robustness tables.

#include "rnewton/bench/profile.hpp"
#include "rnewton/bench/records.hpp"
#include "rnewton/bench/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

using namespace rnewton;
using namespace rnewton::bench;

namespace {

ManifoldTag manifold_of(Suite suite) {
  switch (suite) {
  case Suite::SphereNC:
  case Suite::Rayleigh:
    return ManifoldTag::Sphere;
  case Suite::Tsvd:
    return ManifoldTag::StiefelProduct;
  default:
    return ManifoldTag::SpdCone;
  }
}

// Accepts a full retraction name ("stiefel-qf") or the part after the
// manifold prefix ("qf").
RetractionKind parse_retraction_for(const std::string &name, ManifoldTag tag) {
  for (RetractionKind k : retractions_for(tag)) {
    const std::string full(to_string(k));
    if (full == name || full.substr(full.find('-') + 1) == name)
      return k;
  }
  throw CLI::ValidationError("--retraction", "'" + name + "' is not a retraction of " +
                                                 std::string(to_string(tag)));
}

std::array<Index, 3> parse_tsvd_dims(const std::string &s) {
  std::array<Index, 3> d{};
  char x1 = 0, x2 = 0;
  std::istringstream in(s);
  if (!(in >> d[0] >> x1 >> d[1] >> x2 >> d[2]) || x1 != 'x' || x2 != 'x' || !in.eof())
    throw CLI::ValidationError("--dims", "tsvd dimensions look like 5x3x2, got '" + s + "'");
  return d;
}

struct BenchOptions {
  std::string suite;
  std::string objective = "f1";
  std::vector<int> algorithms;
  std::vector<std::string> retractions;
  std::optional<double> theta;
  double sigma = 1e-3;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> dims;
  std::vector<double> epsilons;
  std::vector<int> families;
  int max_iter = 2000;
  bool paper_scale = false;
  std::string out;
};

SuiteConfig resolve(const BenchOptions &o) {
  Suite suite;
  if (o.suite == "spd") {
    if (o.objective != "f1" && o.objective != "f2")
      throw CLI::ValidationError("--objective", "expected f1 or f2");
    suite = o.objective == "f1" ? Suite::SpdF1 : Suite::SpdF2;
  } else {
    suite = *parse_suite(o.suite);
  }
  SuiteConfig cfg = default_suite_config(suite, o.paper_scale);
  const ManifoldTag tag = manifold_of(suite);

  if (!o.algorithms.empty() || !o.retractions.empty() || o.theta) {
    std::vector<Algorithm> algs;
    for (int a : o.algorithms)
      algs.push_back(static_cast<Algorithm>(a));
    if (algs.empty())
      for (const auto &s : cfg.solvers)
        if (std::find(algs.begin(), algs.end(), s.algorithm) == algs.end())
          algs.push_back(s.algorithm);
    std::vector<RetractionKind> kinds;
    for (const auto &r : o.retractions)
      kinds.push_back(parse_retraction_for(r, tag));
    if (kinds.empty())
      kinds = retractions_for(tag);
    double default_theta = 0.9;
    for (const auto &s : cfg.solvers)
      if (s.algorithm == Algorithm::ModifiedDamped)
        default_theta = s.theta;
    cfg.solvers.clear();
    for (Algorithm a : algs)
      for (RetractionKind k : kinds)
        cfg.solvers.push_back(
            {a, k, a == Algorithm::ModifiedDamped ? o.theta.value_or(default_theta) : 0.0});
  }
  cfg.sigma = o.sigma;
  cfg.max_iter = o.max_iter;
  if (!o.seeds.empty())
    cfg.seeds = o.seeds;
  if (!o.families.empty())
    cfg.families = o.families;
  if (!o.epsilons.empty())
    cfg.epsilons = o.epsilons;
  if (!o.dims.empty()) {
    if (suite == Suite::Tsvd) {
      cfg.tsvd_dims.clear();
      for (const auto &d : o.dims)
        cfg.tsvd_dims.push_back(parse_tsvd_dims(d));
    } else {
      cfg.dims.clear();
      for (const auto &d : o.dims)
        cfg.dims.push_back(std::stol(d));
    }
  }
  return cfg;
}

template <class Write> void emit(const std::string &path, Write write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path + " for writing");
  write(os);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Riemannian Newton solvers: benchmark suites, performance profiles and "
               "robustness tables"};
  app.require_subcommand(1);

  BenchOptions bo;
  auto *bench = app.add_subcommand("bench", "Run a benchmark suite and write a records CSV");
  bench->add_option("suite", bo.suite, "Suite to run")
      ->required()
      ->check(CLI::IsMember({"sphere-nc", "rayleigh", "tsvd", "spd"}));
  bench->add_option("--objective", bo.objective, "SPD objective: f1 or f2")
      ->check(CLI::IsMember({"f1", "f2"}));
  bench->add_option("--algorithm", bo.algorithms, "Algorithm(s): 1 pure, 2 damped, 3 angle test")
      ->check(CLI::Range(1, 3));
  bench->add_option("--retraction", bo.retractions,
                    "Retraction(s), e.g. proj, stiefel-qf, spd-first-order");
  bench->add_option("--theta", bo.theta, "Angle-test parameter for algorithm 3")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--sigma", bo.sigma, "Armijo parameter in (0, 1/2)");
  bench->add_option("--seed", bo.seeds, "Instance seed(s)");
  bench->add_option("--dims", bo.dims, "Dimensions; tsvd uses MxNxP");
  bench->add_option("--epsilon-sweep", bo.epsilons, "tsvd starting-point perturbations");
  bench->add_option("--families", bo.families, "Matrix families (1-5) for rayleigh and spd")
      ->check(CLI::Range(1, 5));
  bench->add_option("--max-iter", bo.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  bench->add_flag("--paper-scale", bo.paper_scale, "Use the dimensions of the original experiments");
  bench->add_option("--out", bo.out, "Output CSV path (default stdout)");

  std::string profile_in, profile_out, metric_name = "iters";
  auto *profile = app.add_subcommand("profile", "Performance profile from a records CSV");
  profile->add_option("records", profile_in, "Records CSV")->required()->check(CLI::ExistingFile);
  profile->add_option("--metric", metric_name, "iters, field_evals or cpu_seconds")
      ->check(CLI::IsMember({"iters", "field_evals", "cpu_seconds"}));
  profile->add_option("--out", profile_out, "Output CSV path (default stdout)");

  std::string robust_in, robust_out;
  auto *robust = app.add_subcommand("robustness", "Solved percentage per solver and epsilon");
  robust->add_option("records", robust_in, "Records CSV")->required()->check(CLI::ExistingFile);
  robust->add_option("--out", robust_out, "Output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      const SuiteConfig cfg = resolve(bo);
      RecordsFile file;
      file.config = describe(cfg);
      file.records = run_suite(cfg);
      emit(bo.out, [&](std::ostream &os) { write_records(os, file); });
    } else if (*profile) {
      const RecordsFile in = read_records_file(profile_in);
      const Metric metric = *parse_metric(metric_name);
      const auto prof = performance_profile(in.records, metric);
      const std::string config =
          " profile metric=" + metric_name + " records=" + profile_in + " source:" + in.config;
      emit(profile_out, [&](std::ostream &os) { write_profile_csv(os, prof, config); });
    } else if (*robust) {
      const RecordsFile in = read_records_file(robust_in);
      const std::string config = " robustness records=" + robust_in + " source:" + in.config;
      emit(robust_out,
           [&](std::ostream &os) { write_robustness_csv(os, robustness_table(in.records), config); });
    }
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
