// Benchmark result rows and their CSV file format.
//
// A records file is UTF-8 text: one '#'-prefixed line echoing the resolved
// run configuration, then a header line with the field names below, then
// one row per run. Floating-point fields use 17 significant digits so a
// read/write cycle reproduces the file byte for byte.
//
// field_evals counts evaluations of the vector field X, including the
// merit evaluations of every line-search trial; operator applications are
// not counted.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnewton::bench {

struct BenchmarkRecord {
  std::string problem_id;
  std::string manifold;
  std::string family;
  std::string dims;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  int algorithm = 2;
  std::string retraction;
  double theta = 0.0;
  double sigma = 1e-3;
  int iters = 0;
  std::int64_t field_evals = 0;
  double cpu_seconds = 0.0;
  std::string status;
  double final_merit = 0.0;
  double final_stationarity = 0.0;

  bool solved() const { return status == "Converged"; }
  /// Label identifying the solver configuration, e.g. "alg3/stiefel-qf/theta=0.9".
  std::string solver_label() const;
};

inline constexpr const char *kRecordHeader =
    "problem_id,manifold,family,dims,seed,epsilon,algorithm,retraction,theta,sigma,iters,"
    "field_evals,cpu_seconds,status,final_merit,final_stationarity";

struct RecordsFile {
  std::string config; // without the leading '#'
  std::vector<BenchmarkRecord> records;
};

class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// %.17g formatting.
std::string format_double(double x);

void write_records(std::ostream &os, const RecordsFile &file);
RecordsFile read_records(std::istream &is);

void write_records_file(const std::string &path, const RecordsFile &file);
RecordsFile read_records_file(const std::string &path);

} // namespace rnewton::bench
