#include "rnewton/bench/records.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rnewton::bench {

namespace {

std::vector<std::string> split_row(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

double parse_double(const std::string &s, std::size_t row) {
  char *end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw CsvError("row " + std::to_string(row) + ": bad number '" + s + "'");
  return x;
}

long long parse_int(const std::string &s, std::size_t row) {
  char *end = nullptr;
  const long long x = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw CsvError("row " + std::to_string(row) + ": bad integer '" + s + "'");
  return x;
}

std::uint64_t parse_u64(const std::string &s, std::size_t row) {
  char *end = nullptr;
  const unsigned long long x = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw CsvError("row " + std::to_string(row) + ": bad integer '" + s + "'");
  return x;
}

void check_text(const std::string &s) {
  if (s.find_first_of(",\n\r") != std::string::npos)
    throw CsvError("text field contains a separator: '" + s + "'");
}

} // namespace

std::string BenchmarkRecord::solver_label() const {
  std::string out = "alg" + std::to_string(algorithm) + "/" + retraction;
  if (algorithm == 3)
    out += "/theta=" + format_double(theta);
  return out;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_records(std::ostream &os, const RecordsFile &file) {
  if (file.config.find('\n') != std::string::npos)
    throw CsvError("config echo must be a single line");
  os << '#' << file.config << '\n' << kRecordHeader << '\n';
  for (const auto &r : file.records) {
    for (const auto *s : {&r.problem_id, &r.manifold, &r.family, &r.dims, &r.retraction, &r.status})
      check_text(*s);
    os << r.problem_id << ',' << r.manifold << ',' << r.family << ',' << r.dims << ',' << r.seed
       << ',' << format_double(r.epsilon) << ',' << r.algorithm << ',' << r.retraction << ','
       << format_double(r.theta) << ',' << format_double(r.sigma) << ',' << r.iters << ','
       << r.field_evals << ',' << format_double(r.cpu_seconds) << ',' << r.status << ','
       << format_double(r.final_merit) << ',' << format_double(r.final_stationarity) << '\n';
  }
}

RecordsFile read_records(std::istream &is) {
  RecordsFile file;
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw CsvError("records file must start with a '#' config line");
  file.config = line.substr(1);
  if (!std::getline(is, line) || line != kRecordHeader)
    throw CsvError("unexpected records header");
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty())
      continue;
    const auto c = split_row(line);
    if (c.size() != 16)
      throw CsvError("row " + std::to_string(row) + ": expected 16 fields, got " +
                     std::to_string(c.size()));
    BenchmarkRecord r;
    r.problem_id = c[0];
    r.manifold = c[1];
    r.family = c[2];
    r.dims = c[3];
    r.seed = parse_u64(c[4], row);
    r.epsilon = parse_double(c[5], row);
    r.algorithm = static_cast<int>(parse_int(c[6], row));
    r.retraction = c[7];
    r.theta = parse_double(c[8], row);
    r.sigma = parse_double(c[9], row);
    r.iters = static_cast<int>(parse_int(c[10], row));
    r.field_evals = parse_int(c[11], row);
    r.cpu_seconds = parse_double(c[12], row);
    r.status = c[13];
    r.final_merit = parse_double(c[14], row);
    r.final_stationarity = parse_double(c[15], row);
    file.records.push_back(std::move(r));
  }
  return file;
}

void write_records_file(const std::string &path, const RecordsFile &file) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw CsvError("cannot open " + path + " for writing");
  write_records(os, file);
}

RecordsFile read_records_file(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw CsvError("cannot open " + path);
  return read_records(is);
}

} // namespace rnewton::bench
