#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "warpopt/commands.hpp"
#include "warpopt/config.hpp"
#include "warpopt/log.hpp"
#include "warpopt/problems.hpp"

using namespace warpopt;

namespace {

std::vector<double> parse_taus(const std::string& list) {
  std::vector<double> taus;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      taus.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad --tau entry '" + item + "'");
    }
  }
  return taus;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging_from_env();

  CLI::App app{"Bound-constrained optimization by sigmoidal domain warping"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<int> jobs;
  std::optional<std::string> taus;
  std::optional<long> budget;
  std::string runs_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration document");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one problem");
  add_common(solve);
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference audit of gradients");
  add_common(gradcheck);
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark campaign");
  add_common(bench);
  bench->add_option("--jobs", jobs, "worker threads");
  bench->add_option("--tau", taus, "comma-separated relative KKT tolerances");
  bench->add_option("--budget", budget, "evaluations per run, in units of n + 1");
  CLI::App* profile = app.add_subcommand("profile", "recompute data profiles from runs.jsonl");
  profile->add_option("runs", runs_path, "runs.jsonl from a previous bench")->required();
  profile->add_option("--out", out_dir, "output directory");
  CLI::App* problems = app.add_subcommand("problems", "list the built-in problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*problems) {
      std::cout << registry_table(registry());
      return kExitOk;
    }
    if (*profile) return cmd_profile(runs_path, out_dir);

    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (jobs) cfg.jobs = *jobs;
    if (taus) cfg.taus = parse_taus(*taus);
    if (budget) cfg.budget = *budget;

    if (*solve) return cmd_solve(cfg, out_dir);
    if (*gradcheck) return cmd_gradcheck(cfg, out_dir);
    return cmd_bench(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnmet;
  }
}
