#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>

#include "nehari/config.hpp"

namespace nehari {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesisViolation = 2;
inline constexpr int kExitNoConvergence = 3;
inline constexpr int kExitBadConfig = 4;

namespace detail {

inline std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

inline std::string config_hash(const json& resolved) {
  const std::size_t h = std::hash<std::string>{}(resolved.dump());
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%08zx", h & 0xffffffffu);
  return buf;
}

}  // namespace detail

/// One output directory per run: <out>/<timestamp>-<hash-of-resolved-config>.
inline std::filesystem::path make_run_dir(const RunConfig& cfg) {
  const std::filesystem::path dir =
      std::filesystem::path(cfg.out_dir) /
      (detail::timestamp_utc() + "-" + detail::config_hash(cfg.resolved()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                           const std::string& subcommand, double wall_seconds) {
  json manifest;
  manifest["subcommand"] = subcommand;
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["config"] = cfg.resolved();
  manifest["wall_seconds"] = wall_seconds;
  write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

inline int run_solve(const RunConfig& cfg, const std::filesystem::path& dir) {
  SolveResult res;
  if (cfg.is_affine()) {
    res = ground_state(cfg.make_affine(), cfg.make_solve_options());
  } else {
    const ModelSpec m = cfg.make_model();
    std::optional<double> c;
    if (m.ngrq_path()) {
      if (cfg.c_values.empty()) throw config_error("solve needs a c value");
      c = cfg.c_values.front();
    }
    res = ground_state(m, c, cfg.make_solve_options());
  }
  write_text((dir / "result.json").string(), solve_result_to_json(res).dump(2) + "\n");
  store_field((dir / "u.csv").string(), res.u);
  return res.converged ? kExitOk : kExitNoConvergence;
}

inline int run_sweep(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ModelSpec m = cfg.make_model();
  const auto rows = sweep_c(m, cfg.c_values, cfg.make_solve_options());
  std::vector<std::vector<double>> csv;
  bool all_converged = true;
  for (const auto& row : rows) {
    csv.push_back({row.c, row.lambda, row.residual, row.converged ? 1.0 : 0.0});
    all_converged = all_converged && row.converged;
  }
  write_csv((dir / "sweep.csv").string(), "c,lambda_1c,residual,converged", csv);
  return all_converged ? kExitOk : kExitNoConvergence;
}

inline int run_minimax(const RunConfig& cfg, const std::filesystem::path& dir) {
  const ModelSpec m = cfg.make_model();
  if (cfg.c_values.empty()) throw config_error("minimax needs a c value");
  const auto seq =
      minimax_sequence(m, cfg.c_values.front(), cfg.minimax_n,
                       cfg.make_solve_options());
  std::vector<std::vector<double>> csv;
  for (const auto& est : seq)
    csv.push_back({static_cast<double>(est.n), est.value,
                   static_cast<double>(est.subspace_dim),
                   static_cast<double>(est.inner_iterations)});
  write_csv((dir / "minimax.csv").string(), "n,value,subspace_dim,inner_iterations",
            csv);
  return kExitOk;
}

inline int run_fibering(const RunConfig& cfg, const std::filesystem::path& dir) {
  const Grid grid = cfg.make_grid();
  Field u = cfg.fibering_field.empty()
                ? laplacian_eigenbasis(grid, 1).front().second
                : load_field(cfg.fibering_field, grid);
  std::vector<double> t_grid =
      detail::log_spaced(cfg.fibering_t_lo, cfg.fibering_t_hi, cfg.fibering_points);
  std::vector<ProfileRow> rows;
  if (cfg.is_affine()) {
    rows = fibering_profile(cfg.make_affine(), u, t_grid);
  } else {
    const ModelSpec m = cfg.make_model();
    std::optional<double> c;
    if (m.ngrq_path()) {
      if (cfg.c_values.empty()) throw config_error("fibering needs a c value");
      c = cfg.c_values.front();
    }
    rows = fibering_profile(m, u, c, t_grid);
  }
  std::vector<std::vector<double>> csv;
  for (const auto& r : rows) csv.push_back({r.t, r.value, r.derivative});
  write_csv((dir / "fibering.csv").string(), "t,value,derivative", csv);
  return kExitOk;
}

inline int run_validate(const RunConfig& cfg, const std::filesystem::path& dir,
                        std::ostream& out = std::cout) {
  std::vector<ValidationReport> reports;
  const double c0 = cfg.c_values.empty() ? 1.0 : cfg.c_values.front();
  const int c_sign = c0 < 0.0 ? -1 : +1;

  if (cfg.is_affine()) {
    const AffineProblem ap = cfg.make_affine();
    reports.push_back(check_h1_unimodal(
        ap.grid,
        [&](const Field& u, double t) {
          const double E = affine_energy(ap.grid, u, ap.quad, ap.params);
          detail::DirectFiber fiber{ap.grid, u, ap.nonlin,
                                    std::pow(E, ap.params.p), ap.params.p};
          return fiber.derivative(t);
        },
        cfg.validate_samples, cfg.seed));
    reports.push_back(check_scalar_condition(ap.nonlin, "f1"));
  } else {
    const ModelSpec m = cfg.make_model();
    if (m.kind == ModelSpec::Kind::kirchhoff) {
      reports.push_back(check_h1_unimodal(
          m.grid,
          [&](const Field& u, double t) {
            const double ep = dirichlet_energy_p(m.grid, u, m.p, m.eps);
            detail::DirectFiber fiber{m.grid, u, m.nonlin,
                                      std::pow(ep, m.theta / m.p), m.theta};
            return fiber.derivative(t);
          },
          cfg.validate_samples, cfg.seed));
      reports.push_back(check_scalar_condition(m.nonlin, "f1"));
    } else {
      reports.push_back(check_ray_shape(m, c_sign, cfg.validate_samples,
                                        {1e-3, 1e3}, 64, cfg.seed));
      reports.push_back(check_F3_coercivity(m, 2 * cfg.validate_samples, cfg.seed));
      if (m.kind == ModelSpec::Kind::semilinear ||
          m.kind == ModelSpec::Kind::concave_convex) {
        reports.push_back(check_scalar_condition(m.nonlin, "f1"));
        ScalarConditionParams sp;
        sp.c_sign = c_sign;
        reports.push_back(check_scalar_condition(m.nonlin, "f2", sp));
      }
      if (m.kind == ModelSpec::Kind::concave_convex) {
        ScalarConditionParams sp;
        sp.q = m.q;
        reports.push_back(check_scalar_condition(m.nonlin, "f3", sp));
      }
      if (m.kind == ModelSpec::Kind::pq_general) {
        for (auto& rep : check_A_conditions(m.p, m.q, m.r, m.k0, m.k1))
          reports.push_back(std::move(rep));
      }
      if (m.kind == ModelSpec::Kind::brezis_nirenberg) {
        ValidationReport rep;
        rep.hypothesis = "BN-threshold";
        const double S = estimate_sobolev_constant(m.grid, m.two_star);
        const BnThreshold bt = bn_threshold(m.N, S, c0);
        rep.samples = 1;
        rep.verdict = bt.admissible ? ValidationReport::Verdict::pass
                                    : ValidationReport::Verdict::fail;
        rep.notes = "S_est = " + detail::format_value(S) +
                    ", max_j = " + detail::format_value(bt.max_j) +
                    ", threshold S^{N/2}/N = " +
                    detail::format_value(std::pow(S, 0.5 * m.N) / m.N);
        if (!bt.admissible)
          rep.counterexample = "c = " + detail::format_value(c0) +
                               " is not below the compactness threshold";
        reports.push_back(std::move(rep));
      }
    }
  }

  json jreports = json::array();
  bool any_fail = false;
  out << "hypothesis        verdict        samples  notes\n";
  for (const auto& rep : reports) {
    jreports.push_back(validation_report_to_json(rep));
    any_fail = any_fail || rep.verdict == ValidationReport::Verdict::fail;
    char line[256];
    std::snprintf(line, sizeof(line), "%-17s %-14s %7d  %s", rep.hypothesis.c_str(),
                  verdict_name(rep.verdict).c_str(), rep.samples,
                  rep.counterexample ? rep.counterexample->c_str()
                                     : rep.notes.c_str());
    out << line << "\n";
  }
  write_text((dir / "validate.json").string(), jreports.dump(2) + "\n");
  return any_fail ? kExitHypothesisViolation : kExitOk;
}

inline int run_oracle(const RunConfig& cfg, const std::filesystem::path& dir) {
  const Grid grid = cfg.make_grid();
  const NonlinearitySpec f = cfg.make_nonlin();
  json j;
  if (cfg.oracle_kind == "shooting") {
    const auto branches =
        shooting_oracle_1d(grid, f, cfg.oracle_lambda, cfg.oracle_tol);
    j["kind"] = "shooting";
    j["lambda"] = cfg.oracle_lambda;
    json arr = json::array();
    for (std::size_t i = 0; i < branches.size(); ++i) {
      arr.push_back({{"energy", branches[i].energy},
                     {"slope0", branches[i].slope0},
                     {"sign_changes", branches[i].sign_changes}});
      store_field((dir / ("branch" + std::to_string(i) + ".csv")).string(),
                  branches[i].u);
    }
    j["branches"] = std::move(arr);
  } else if (cfg.oracle_kind == "prescribed_energy") {
    if (cfg.c_values.empty()) throw config_error("oracle needs a c value");
    const auto res =
        prescribed_energy_oracle_1d(grid, f, cfg.c_values.front(), cfg.oracle_tol);
    j["kind"] = "prescribed_energy";
    j["c"] = cfg.c_values.front();
    j["inconclusive"] = res.inconclusive;
    j["note"] = res.note;
    if (!res.inconclusive) {
      j["lambda"] = res.lambda;
      store_field((dir / "oracle_u.csv").string(), res.u);
    }
  } else {
    throw config_error("unknown oracle kind: " + cfg.oracle_kind);
  }
  write_text((dir / "oracle.json").string(), j.dump(2) + "\n");
  return kExitOk;
}

/// Dispatches a subcommand, creating the run directory, writing outputs and
/// the manifest. Returns the CLI exit code.
inline int run(const std::string& subcommand, const RunConfig& cfg,
               std::ostream& out = std::cout) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::path dir;
  int code = kExitOk;
  try {
    dir = make_run_dir(cfg);
    out << dir.string() << "\n";
    if (subcommand == "solve")
      code = run_solve(cfg, dir);
    else if (subcommand == "sweep")
      code = run_sweep(cfg, dir);
    else if (subcommand == "minimax")
      code = run_minimax(cfg, dir);
    else if (subcommand == "fibering")
      code = run_fibering(cfg, dir);
    else if (subcommand == "validate")
      code = run_validate(cfg, dir, out);
    else if (subcommand == "oracle")
      code = run_oracle(cfg, dir);
    else
      throw config_error("unknown subcommand: " + subcommand);
  } catch (const config_error& e) {
    out << "configuration error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const hypothesis_violation& e) {
    out << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesisViolation;
  } catch (const not_applicable& e) {
    out << "configuration error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(dir, cfg, subcommand, wall);
  return code;
}

}  // namespace nehari
