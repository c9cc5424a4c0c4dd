#ifndef IMITATION_SCENARIO_HPP
#define IMITATION_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "imitation/analysis.hpp"
#include "imitation/dynamics.hpp"
#include "imitation/equilibria.hpp"
#include "imitation/game.hpp"
#include "imitation/mechanism.hpp"
#include "imitation/types.hpp"

namespace imitation {

/// Scenario validation failure (maps to exit code 2 in the CLI).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GameSpec {
  std::optional<std::string> builtin;
  // declarative form: r(y) = b + A y, optional phi(y) = y'Py + q'y
  std::optional<std::vector<std::string>> actions;
  std::optional<Eigen::MatrixXd> A;
  std::optional<Eigen::VectorXd> b;
  std::optional<Eigen::MatrixXd> P;
  std::optional<Eigen::VectorXd> q;
  std::string name;
};

struct NetworkSpec {
  std::vector<std::string> communities;
  Eigen::VectorXd eta;
  Eigen::MatrixXd W;
};

struct MechanismSpec {
  std::string type;  // replicator | pairwise_proportional | sigmoid
  std::optional<double> c;        // replicator offset
  std::optional<double> k;        // sigmoid steepness, scalar
  std::optional<Eigen::MatrixXd> K;  // sigmoid steepness, full matrix
};

struct InitialStateSpec {
  enum class Kind { explicit_matrix, balanced, random_interior };
  Kind kind = Kind::balanced;
  std::optional<Eigen::MatrixXd> x;  // explicit_matrix
  std::optional<Eigen::VectorXd> y;  // balanced
  std::uint64_t seed = 0;            // random_interior
};

struct AnalysisSpec {
  std::string type;         // convergence | balancedness
  std::string target_type;  // point | nash_set | y_circle | balanced_point
  std::optional<Eigen::VectorXd> target_y;
  double threshold = 1e-3;
  double window = 10.0;
};

struct EquilibriaSpec {
  int grid_density = 20;
};

struct Scenario {
  std::string name;
  GameSpec game;
  NetworkSpec network;
  MechanismSpec mechanism;
  InitialStateSpec initial_state;
  IntegratorSettings integrator;
  std::vector<AnalysisSpec> analyses;
  EquilibriaSpec equilibria;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical serialization: fixed field order, round-trip exact numbers.
/// Parsing then serializing a canonical document is byte-identical.
std::string canonical_json(const Scenario& s);

PopulationGame make_game(const GameSpec& spec);
CommunityNetwork make_network(const NetworkSpec& spec);
ImitationMechanism make_mechanism(const MechanismSpec& spec,
                                  const PopulationGame& game);
SystemState make_initial_state(const InitialStateSpec& spec,
                               const CommunityNetwork& net, int n_actions);

struct RunPaths {
  std::filesystem::path trajectory_csv;
  std::filesystem::path summary_json;
};

/// Integrates the scenario and writes <name>.trajectory.csv plus
/// <name>.summary.json under out_dir. Identical scenario and seed produce
/// byte-identical files.
RunPaths run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

/// Equilibrium records (enumeration-derived balanced states merged with the
/// grid oracle), serialized as a JSON array.
std::string equilibria_json(const Scenario& s);

/// Preflight: which structural hypotheses the scenario satisfies and why.
std::string check_json(const Scenario& s);

struct SweepResult {
  std::filesystem::path index_json;
  int runs = 0;
};

/// Runs the Cartesian product of parameter overrides concurrently, one run
/// output pair per combination, and writes an index mapping parameters to
/// files. Deterministic for fixed seeds regardless of worker count.
SweepResult run_sweep(const Scenario& base, const std::string& overrides_json,
                      const std::filesystem::path& out_dir, int workers);

}  // namespace imitation

#endif
