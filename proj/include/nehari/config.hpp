#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nehari/io.hpp"

namespace nehari {

/// Flat key/value view of a TOML-style config: sections and inline tables
/// are flattened to dotted keys. Supports numbers, booleans, strings,
/// arrays of numbers/strings, inline tables and # comments.
struct ConfigValue {
  enum class Type { number, boolean, string, number_list, string_list } type =
      Type::number;
  double num = 0.0;
  bool b = false;
  std::string str;
  std::vector<double> nums;
  std::vector<std::string> strs;
};

using ConfigMap = std::map<std::string, ConfigValue>;

namespace detail {

inline void strip_comment(std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) {
      line.erase(i);
      return;
    }
  }
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline ConfigValue parse_scalar(const std::string& raw, const std::string& key) {
  ConfigValue v;
  const std::string s = trim(raw);
  if (s.empty()) throw config_error("empty value for key " + key);
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw config_error("unterminated string for key " + key);
    v.type = ConfigValue::Type::string;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.type = ConfigValue::Type::boolean;
    v.b = (s == "true");
    return v;
  }
  try {
    std::size_t used = 0;
    v.num = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    v.type = ConfigValue::Type::number;
    return v;
  } catch (const std::exception&) {
    throw config_error("cannot parse value '" + s + "' for key " + key);
  }
}

inline void parse_value_into(ConfigMap& out, const std::string& key,
                             const std::string& raw);

inline std::vector<std::string> split_top_level(const std::string& body) {
  std::vector<std::string> parts;
  int depth = 0;
  bool in_str = false;
  std::string cur;
  for (char ch : body) {
    if (ch == '"') in_str = !in_str;
    if (!in_str) {
      if (ch == '{' || ch == '[') ++depth;
      if (ch == '}' || ch == ']') --depth;
      if (ch == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += ch;
  }
  if (!trim(cur).empty()) parts.push_back(cur);
  return parts;
}

inline void parse_value_into(ConfigMap& out, const std::string& key,
                             const std::string& raw) {
  const std::string s = trim(raw);
  if (!s.empty() && s.front() == '{') {
    if (s.back() != '}') throw config_error("unterminated inline table for " + key);
    for (const std::string& part : split_top_level(s.substr(1, s.size() - 2))) {
      const auto eq = part.find('=');
      if (eq == std::string::npos)
        throw config_error("bad inline-table entry '" + part + "' for " + key);
      parse_value_into(out, key + "." + trim(part.substr(0, eq)),
                       part.substr(eq + 1));
    }
    return;
  }
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw config_error("unterminated array for " + key);
    ConfigValue v;
    bool strings = false;
    for (const std::string& part : split_top_level(s.substr(1, s.size() - 2))) {
      ConfigValue item = parse_scalar(part, key);
      if (item.type == ConfigValue::Type::string) {
        strings = true;
        v.strs.push_back(item.str);
      } else {
        v.nums.push_back(item.num);
      }
    }
    v.type = strings ? ConfigValue::Type::string_list
                     : ConfigValue::Type::number_list;
    out[key] = std::move(v);
    return;
  }
  out[key] = parse_scalar(s, key);
}

}  // namespace detail

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_comment(line);
    const std::string s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw config_error("bad section header at line " + std::to_string(lineno));
      section = detail::trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error("expected key = value at line " + std::to_string(lineno));
    std::string key = detail::trim(s.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    detail::parse_value_into(out, key, s.substr(eq + 1));
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Fully resolved run configuration. Every field has a documented default;
/// the resolved() echo goes into the run manifest.
struct RunConfig {
  std::string model = "semilinear";  // or concave_convex, brezis_nirenberg,
                                     // pq_general, kirchhoff, affine
  std::string nonlin_kind = "pure_power";
  double nonlin_r = 4.0;
  double nonlin_p = 3.0;
  double nonlin_beta = 1.0;
  double nonlin_theta = 1.0;

  double q = 1.5;
  double p = 2.0;
  double r = 3.0;
  double k0 = 1.0;
  double k1 = 1.0;
  int N = 3;
  double two_star = 6.0;
  double theta = 1.0;
  std::optional<double> eps;

  std::vector<double> c_values = {1.0};

  int dim = 1;
  int n = 64;

  double residual_tol = 1e-6;
  double energy_tol = 1e-8;
  int max_iterations = 5000;
  double fiber_tol = 1e-12;
  int multi_starts = 5;
  std::uint64_t seed = 12345;

  int affine_m = 64;
  double affine_eps_floor = 1e-10;

  int minimax_n = 5;

  double fibering_t_lo = 0.01;
  double fibering_t_hi = 100.0;
  int fibering_points = 200;
  std::string fibering_field;  // optional stored-field path

  int validate_samples = 8;

  std::string oracle_kind = "shooting";  // or prescribed_energy
  double oracle_lambda = 0.0;
  double oracle_tol = 1e-6;

  std::string out_dir = "runs";

  NonlinearitySpec make_nonlin() const {
    if (nonlin_kind == "pure_power") return NonlinearitySpec::pure_power(nonlin_r);
    if (nonlin_kind == "power_log") return NonlinearitySpec::power_log(nonlin_p);
    if (nonlin_kind == "saturated_power")
      return NonlinearitySpec::saturated_power(nonlin_p);
    if (nonlin_kind == "piecewise_power")
      return NonlinearitySpec::piecewise_power(nonlin_beta, nonlin_r);
    if (nonlin_kind == "piecewise_power_log")
      return NonlinearitySpec::piecewise_power_log(nonlin_beta, nonlin_theta);
    throw config_error("unknown nonlinearity kind: " + nonlin_kind);
  }

  Grid make_grid() const { return build_grid(dim, n); }

  bool is_affine() const { return model == "affine"; }

  ModelSpec make_model() const {
    const Grid g = make_grid();
    ModelSpec m;
    if (model == "semilinear") {
      m = ModelSpec::semilinear(g, make_nonlin());
    } else if (model == "concave_convex") {
      m = ModelSpec::concave_convex(g, make_nonlin(), q);
    } else if (model == "brezis_nirenberg") {
      m = ModelSpec::brezis_nirenberg(g, N, two_star);
    } else if (model == "pq_general") {
      m = ModelSpec::pq_general(g, p, q, r, k0, k1);
    } else if (model == "kirchhoff") {
      m = ModelSpec::kirchhoff(g, p, theta, make_nonlin());
    } else {
      throw config_error("unknown model: " + model);
    }
    if (eps) m.eps = *eps;
    return m;
  }

  AffineProblem make_affine() const {
    if (!is_affine()) throw config_error("config does not select the affine model");
    return make_affine_problem(make_grid(), p, affine_m, make_nonlin(),
                               affine_eps_floor);
  }

  SolveOptions make_solve_options() const {
    SolveOptions o;
    o.residual_tol = residual_tol;
    o.energy_tol = energy_tol;
    o.max_iterations = max_iterations;
    o.fiber_tol = fiber_tol;
    o.multi_starts = multi_starts;
    o.seed = seed;
    return o;
  }

  json resolved() const {
    json j;
    j["problem"]["model"] = model;
    j["problem"]["nonlinearity"]["kind"] = nonlin_kind;
    j["problem"]["nonlinearity"]["r"] = nonlin_r;
    j["problem"]["nonlinearity"]["p"] = nonlin_p;
    j["problem"]["nonlinearity"]["beta"] = nonlin_beta;
    j["problem"]["nonlinearity"]["theta"] = nonlin_theta;
    j["problem"]["q"] = q;
    j["problem"]["p"] = p;
    j["problem"]["r"] = r;
    j["problem"]["k0"] = k0;
    j["problem"]["k1"] = k1;
    j["problem"]["N"] = N;
    j["problem"]["two_star"] = two_star;
    j["problem"]["theta"] = theta;
    if (eps)
      j["problem"]["eps"] = *eps;
    else
      j["problem"]["eps"] = "model-default";
    j["problem"]["c"] = c_values;
    j["grid"]["dim"] = dim;
    j["grid"]["n"] = n;
    j["solver"]["residual_tol"] = residual_tol;
    j["solver"]["energy_tol"] = energy_tol;
    j["solver"]["max_iterations"] = max_iterations;
    j["solver"]["fiber_tol"] = fiber_tol;
    j["solver"]["multi_starts"] = multi_starts;
    j["solver"]["seed"] = seed;
    j["affine"]["m"] = affine_m;
    j["affine"]["eps_floor"] = affine_eps_floor;
    j["minimax"]["n"] = minimax_n;
    j["fibering"]["t_lo"] = fibering_t_lo;
    j["fibering"]["t_hi"] = fibering_t_hi;
    j["fibering"]["points"] = fibering_points;
    j["fibering"]["field"] = fibering_field;
    j["validate"]["samples"] = validate_samples;
    j["oracle"]["kind"] = oracle_kind;
    j["oracle"]["lambda"] = oracle_lambda;
    j["oracle"]["tol"] = oracle_tol;
    j["output"]["dir"] = out_dir;
    return j;
  }
};

namespace detail {

inline double get_num(const ConfigMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  if (it->second.type != ConfigValue::Type::number)
    throw config_error("key " + key + " must be a number");
  return it->second.num;
}

inline int get_int(const ConfigMap& m, const std::string& key, int fallback) {
  return static_cast<int>(get_num(m, key, fallback));
}

inline std::string get_str(const ConfigMap& m, const std::string& key,
                           const std::string& fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  if (it->second.type != ConfigValue::Type::string)
    throw config_error("key " + key + " must be a string");
  return it->second.str;
}

}  // namespace detail

inline RunConfig run_config_from_map(const ConfigMap& m) {
  RunConfig c;
  c.model = detail::get_str(m, "problem.model", c.model);
  c.nonlin_kind = detail::get_str(m, "problem.nonlinearity.kind", c.nonlin_kind);
  c.nonlin_r = detail::get_num(m, "problem.nonlinearity.r", c.nonlin_r);
  c.nonlin_p = detail::get_num(m, "problem.nonlinearity.p", c.nonlin_p);
  c.nonlin_beta = detail::get_num(m, "problem.nonlinearity.beta", c.nonlin_beta);
  c.nonlin_theta = detail::get_num(m, "problem.nonlinearity.theta", c.nonlin_theta);
  c.q = detail::get_num(m, "problem.q", c.q);
  c.p = detail::get_num(m, "problem.p", c.p);
  c.r = detail::get_num(m, "problem.r", c.r);
  c.k0 = detail::get_num(m, "problem.k0", c.k0);
  c.k1 = detail::get_num(m, "problem.k1", c.k1);
  c.N = detail::get_int(m, "problem.N", c.N);
  c.two_star = detail::get_num(m, "problem.two_star", c.two_star);
  c.theta = detail::get_num(m, "problem.theta", c.theta);
  if (m.count("problem.eps")) c.eps = detail::get_num(m, "problem.eps", 0.0);
  if (auto it = m.find("problem.c"); it != m.end()) {
    if (it->second.type == ConfigValue::Type::number_list)
      c.c_values = it->second.nums;
    else
      c.c_values = {it->second.num};
  }
  c.dim = detail::get_int(m, "grid.dim", c.dim);
  c.n = detail::get_int(m, "grid.n", c.n);
  c.residual_tol = detail::get_num(m, "solver.residual_tol", c.residual_tol);
  c.energy_tol = detail::get_num(m, "solver.energy_tol", c.energy_tol);
  c.max_iterations = detail::get_int(m, "solver.max_iterations", c.max_iterations);
  c.fiber_tol = detail::get_num(m, "solver.fiber_tol", c.fiber_tol);
  c.multi_starts = detail::get_int(m, "solver.multi_starts", c.multi_starts);
  c.seed = static_cast<std::uint64_t>(
      detail::get_num(m, "solver.seed", static_cast<double>(c.seed)));
  c.affine_m = detail::get_int(m, "affine.m", c.affine_m);
  c.affine_eps_floor = detail::get_num(m, "affine.eps_floor", c.affine_eps_floor);
  c.minimax_n = detail::get_int(m, "minimax.n", c.minimax_n);
  c.fibering_t_lo = detail::get_num(m, "fibering.t_lo", c.fibering_t_lo);
  c.fibering_t_hi = detail::get_num(m, "fibering.t_hi", c.fibering_t_hi);
  c.fibering_points = detail::get_int(m, "fibering.points", c.fibering_points);
  c.fibering_field = detail::get_str(m, "fibering.field", c.fibering_field);
  c.validate_samples = detail::get_int(m, "validate.samples", c.validate_samples);
  c.oracle_kind = detail::get_str(m, "oracle.kind", c.oracle_kind);
  c.oracle_lambda = detail::get_num(m, "oracle.lambda", c.oracle_lambda);
  c.oracle_tol = detail::get_num(m, "oracle.tol", c.oracle_tol);
  c.out_dir = detail::get_str(m, "output.dir", c.out_dir);
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  return run_config_from_map(parse_config_file(path));
}

}  // namespace nehari
