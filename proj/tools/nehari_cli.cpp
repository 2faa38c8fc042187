// Command-line driver: ground states and prescribed-energy critical points of
// the built-in variational models, plus fibering profiles, minimax estimates,
// hypothesis validation and the 1D shooting oracles.
//
// Exit codes: 0 success, 2 hypothesis violation / validator fail,
// 3 non-convergence, 4 bad configuration.

#include <CLI11.hpp>

#include "nehari/nehari.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nehari: Nehari-manifold / generalized Rayleigh quotient solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string c_list;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int grid_n = 0;

  for (const char* name :
       {"solve", "sweep", "minimax", "fibering", "validate", "oracle"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (key = value tables)");
    sub->add_option("--out", out_dir, "output directory (default: runs)");
    sub->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--grid-n", grid_n, "interior nodes per axis");
    sub->add_option("--c", c_list, "prescribed level(s), comma separated");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  nehari::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = nehari::load_run_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_set) cfg.seed = seed;
    if (grid_n > 0) cfg.n = grid_n;
    if (!c_list.empty()) {
      cfg.c_values.clear();
      std::stringstream ss(c_list);
      std::string item;
      while (std::getline(ss, item, ','))
        cfg.c_values.push_back(std::stod(item));
    }
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return nehari::kExitBadConfig;
  }

  return nehari::run(subcommand, cfg);
}
