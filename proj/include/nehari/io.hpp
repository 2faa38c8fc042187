#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/solver.hpp"
#include "nehari/validate.hpp"

namespace nehari {

using json = nlohmann::ordered_json;

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Stores nodal values as CSV with a header line recording the grid shape.
/// 17 significant digits: round-trips bit-identically through load_field.
inline void store_field(const std::string& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open for writing: " + path);
  out << "# dim=" << f.grid.dim << " n=" << f.grid.n << "\n";
  for (double v : f.values) out << format_full(v) << "\n";
}

inline Field load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open field file: " + path);
  std::string header;
  std::getline(in, header);
  int dim = 0, n = 0;
  if (std::sscanf(header.c_str(), "# dim=%d n=%d", &dim, &n) != 2)
    throw config_error("field file missing '# dim=<d> n=<n>' header: " + path);
  Field f = zero_field(build_grid(dim, n));
  std::size_t count = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (count >= f.values.size())
      throw config_error("field file has too many values: " + path);
    f.values[count++] = std::stod(line);
  }
  if (count != f.values.size())
    throw config_error("field file has too few values: " + path);
  return f;
}

inline Field load_field(const std::string& path, const Grid& expected) {
  Field f = load_field(path);
  if (!(f.grid == expected))
    throw config_error("field shape mismatch: file has dim=" +
                       std::to_string(f.grid.dim) + " n=" +
                       std::to_string(f.grid.n) + ", configured grid dim=" +
                       std::to_string(expected.dim) + " n=" +
                       std::to_string(expected.n));
  return f;
}

inline json solve_result_to_json(const SolveResult& res) {
  json j;
  if (res.lambda)
    j["lambda"] = *res.lambda;
  else
    j["lambda"] = nullptr;
  j["level"] = res.level;
  j["energy_gap"] = res.energy_gap;
  j["residual"] = res.residual;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  json trace = json::array();
  for (const auto& row : res.trace) trace.push_back({row[0], row[1]});
  j["trace"] = std::move(trace);
  return j;
}

inline json validation_report_to_json(const ValidationReport& rep) {
  json j;
  j["hypothesis"] = rep.hypothesis;
  j["verdict"] = verdict_name(rep.verdict);
  j["samples"] = rep.samples;
  if (rep.counterexample)
    j["counterexample"] = *rep.counterexample;
  else
    j["counterexample"] = nullptr;
  j["notes"] = rep.notes;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open for writing: " + path);
  out << text;
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open for writing: " + path);
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_full(row[i]);
    out << "\n";
  }
}

}  // namespace nehari
