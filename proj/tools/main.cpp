#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "imitation/scenario.hpp"

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw imitation::ScenarioError("cannot open file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and analyzer for imitation dynamics in population "
               "games over community networks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string overrides_path;
  std::string out_dir = ".";
  double step = 0.0;
  double t_end = 0.0;
  long long seed = -1;
  int workers = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_path, "scenario JSON file")
        ->required();
    cmd->add_option("--out-dir", out_dir, "output directory (default: .)");
    cmd->add_option("--step", step, "override the integrator step");
    cmd->add_option("--t-end", t_end, "override the integration horizon");
    cmd->add_option("--seed", seed,
                    "override the random_interior initial-state seed");
  };

  CLI::App* cmd_run = app.add_subcommand(
      "run", "integrate a scenario; writes <name>.trajectory.csv and "
             "<name>.summary.json");
  add_common(cmd_run);
  CLI::App* cmd_eq = app.add_subcommand(
      "equilibria", "enumerate and classify equilibrium states (JSON array)");
  add_common(cmd_eq);
  CLI::App* cmd_check = app.add_subcommand(
      "check", "preflight: which structural hypotheses the scenario meets");
  add_common(cmd_check);
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "run the Cartesian product of parameter overrides");
  add_common(cmd_sweep);
  cmd_sweep->add_option("overrides", overrides_path, "overrides JSON file")
      ->required();
  cmd_sweep->add_option("--workers", workers,
                        "worker threads (default: available parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    imitation::Scenario scenario = imitation::load_scenario(scenario_path);
    if (step > 0.0) scenario.integrator.step = step;
    if (t_end > 0.0) scenario.integrator.t_end = t_end;
    if (seed >= 0 && scenario.initial_state.kind ==
                         imitation::InitialStateSpec::Kind::random_interior) {
      scenario.initial_state.seed = static_cast<std::uint64_t>(seed);
    }
    scenario.integrator.validate();

    if (cmd_run->parsed()) {
      const auto paths = imitation::run_scenario(scenario, out_dir);
      std::cout << paths.trajectory_csv.string() << "\n"
                << paths.summary_json.string() << "\n";
    } else if (cmd_eq->parsed()) {
      std::cout << imitation::equilibria_json(scenario);
    } else if (cmd_check->parsed()) {
      std::cout << imitation::check_json(scenario);
    } else if (cmd_sweep->parsed()) {
      const auto result = imitation::run_sweep(scenario, slurp(overrides_path),
                                               out_dir, workers);
      std::cout << result.index_json.string() << "\n"
                << result.runs << " runs\n";
    }
  } catch (const imitation::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const imitation::IntegrationError& e) {
    std::cerr << "integration aborted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
