#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imitation/scenario.hpp"

using namespace imitation;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarioDir = IMITATION_SCENARIO_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> bundled() {
  return {"fig3_example4", "fig4_pairwise",     "fig4_sigmoid",
          "fig5_rps",      "example5_isolated", "example6_directed"};
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("imitation_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("bundled scenarios parse and canonicalize stably") {
  for (const auto& name : bundled()) {
    const auto text = slurp(kScenarioDir / (name + ".json"));
    const Scenario s = parse_scenario(text);
    CHECK(s.name == name);
    const std::string canonical = canonical_json(s);
    const std::string twice = canonical_json(parse_scenario(canonical));
    CHECK(canonical == twice);
  }
}

TEST_CASE("validation failures carry field diagnostics") {
  CHECK_THROWS_AS(parse_scenario("{"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("{}"), ScenarioError);
  CHECK_THROWS_WITH_AS(
      parse_scenario(R"({"name":"x","game":{"builtin":"nope"},
        "network":{"communities":["a"],"eta":[1.0],"W":[[1.0]]},
        "mechanism":{"type":"sigmoid"},
        "initial_state":{"type":"balanced","y":[1.0]},
        "integrator":{"t_end":1.0}})"),
      doctest::Contains("unknown builtin"), ScenarioError);
  // dimension mismatch between game and initial state
  CHECK_THROWS_AS(
      parse_scenario(R"({"name":"x","game":{"builtin":"congestion"},
        "network":{"communities":["a"],"eta":[1.0],"W":[[1.0]]},
        "mechanism":{"type":"sigmoid"},
        "initial_state":{"type":"balanced","y":[0.5,0.5]},
        "integrator":{"t_end":1.0}})"),
      ScenarioError);
  // window cannot exceed the horizon
  CHECK_THROWS_AS(
      parse_scenario(R"({"name":"x","game":{"builtin":"congestion"},
        "network":{"communities":["a"],"eta":[1.0],"W":[[1.0]]},
        "mechanism":{"type":"sigmoid"},
        "initial_state":{"type":"balanced","y":[0.3,0.3,0.4]},
        "integrator":{"t_end":1.0},
        "analyses":[{"type":"convergence","target":{"type":"nash_set"},
                     "threshold":0.001,"window":5.0}]})"),
      ScenarioError);
}

TEST_CASE("declarative games round-trip through scenarios") {
  const std::string text = R"({
    "name": "affine",
    "game": {"name": "two_road", "actions": ["p", "q"],
             "A": [[-1.0, 0.0], [0.0, -2.0]], "b": [0.1, 0.4],
             "P": [[-0.5, 0.0], [0.0, -1.0]], "q": [0.1, 0.4]},
    "network": {"communities": ["a"], "eta": [1.0], "W": [[1.0]]},
    "mechanism": {"type": "pairwise_proportional"},
    "initial_state": {"type": "balanced", "y": [0.5, 0.5]},
    "integrator": {"t_end": 5.0}
  })";
  const Scenario s = parse_scenario(text);
  const auto game = make_game(s.game);
  CHECK(game.n_actions() == 2);
  REQUIRE(game.affine.has_value());
  REQUIRE(game.potential.has_value());
  const Eigen::VectorXd r = game.rewards(Eigen::Vector2d(0.5, 0.5));
  CHECK(r[0] == doctest::Approx(-0.4));
  CHECK(r[1] == doctest::Approx(-0.6));
  CHECK(canonical_json(parse_scenario(canonical_json(s))) ==
        canonical_json(s));
}

TEST_CASE("sigmoid steepness accepts a full matrix") {
  const std::string text = R"({
    "name": "steepness_matrix",
    "game": {"builtin": "anticoordination"},
    "network": {"communities": ["a"], "eta": [1.0], "W": [[1.0]]},
    "mechanism": {"type": "sigmoid", "K": [[1.0, 4.0], [0.5, 1.0]]},
    "initial_state": {"type": "balanced", "y": [0.5, 0.5]},
    "integrator": {"t_end": 1.0}
  })";
  const Scenario s = parse_scenario(text);
  const auto game = make_game(s.game);
  const auto mech = make_mechanism(s.mechanism, game);
  // equal rewards at the midpoint: every rate sits at 1/2 whatever K is
  const Eigen::MatrixXd f = mech.rates(Eigen::Vector2d(0.5, 0.5));
  CHECK(f(0, 1) == doctest::Approx(0.5));
  // asymmetric steepness shows away from the tie
  const Eigen::MatrixXd g = mech.rates(Eigen::Vector2d(0.9, 0.1));
  CHECK(g(0, 1) > g(1, 0));
  CHECK(canonical_json(parse_scenario(canonical_json(s))) ==
        canonical_json(s));
}

TEST_CASE("random interior initial states are seeded and valid") {
  const std::string base = R"({
    "name": "seeded",
    "game": {"builtin": "congestion"},
    "network": {"communities": ["a", "b"], "eta": [0.7, 0.3],
                "W": [[1.0, 0.2], [0.2, 1.0]]},
    "mechanism": {"type": "sigmoid", "K": 1.0},
    "initial_state": {"type": "random_interior", "seed": 9},
    "integrator": {"t_end": 1.0}
  })";
  const Scenario s = parse_scenario(base);
  const auto net = make_network(s.network);
  const auto x1 = make_initial_state(s.initial_state, net, 3);
  const auto x2 = make_initial_state(s.initial_state, net, 3);
  CHECK(x1.mat() == x2.mat());
  CHECK(x1.mat().minCoeff() > 0.0);
  auto other = s.initial_state;
  other.seed = 10;
  CHECK(make_initial_state(other, net, 3).mat() != x1.mat());
}

TEST_CASE("oversized steps abort the integration, not the validation") {
  // an absurd step makes the stepper overshoot the admissible set; that is
  // an integration failure (CLI exit 3), distinct from scenario validation
  Scenario s = load_scenario(kScenarioDir / "fig4_sigmoid.json");
  s.integrator.step = 10.0;
  s.integrator.t_end = 100.0;
  const auto dir = fresh_dir("abort");
  CHECK_THROWS_AS(run_scenario(s, dir), IntegrationError);
}

TEST_CASE("halving the step moves no bundled endpoint by 1e-6") {
  for (const auto& name : bundled()) {
    const Scenario s = load_scenario(kScenarioDir / (name + ".json"));
    const auto game = make_game(s.game);
    const auto net = make_network(s.network);
    const auto mech = make_mechanism(s.mechanism, game);
    const auto x0 = make_initial_state(s.initial_state, net, game.n_actions());
    auto coarse = s.integrator;
    coarse.record_every = 1 << 30;  // endpoints only
    auto fine = coarse;
    fine.step = coarse.step / 2.0;
    const auto a = integrate(x0, game, net, mech, coarse);
    const auto b = integrate(x0, game, net, mech, fine);
    const double shift =
        (a.states.back().mat() - b.states.back().mat()).cwiseAbs().maxCoeff();
    CHECK(shift < 1e-6);
  }
}

TEST_CASE("sweeps are deterministic regardless of worker count") {
  const Scenario base = load_scenario(kScenarioDir / "example6_directed.json");
  const auto dir1 = fresh_dir("workers1");
  const auto dir4 = fresh_dir("workers4");
  const std::string overrides = R"({
    "grids": [{"path": "initial_state",
               "values": [{"type": "explicit", "x": [[0.0, 0.5], [0.5, 0.0]]},
                           {"type": "balanced", "y": [0.25, 0.75]},
                           {"type": "random_interior", "seed": 3}]}]
  })";
  const auto r1 = run_sweep(base, overrides, dir1, 1);
  const auto r4 = run_sweep(base, overrides, dir4, 4);
  CHECK(r1.runs == 3);
  CHECK(r4.runs == 3);
  CHECK(slurp(r1.index_json) == slurp(r4.index_json));
  for (int i = 0; i < 3; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "example6_directed_%03d.trajectory.csv",
                  i);
    CHECK(slurp(dir1 / name) == slurp(dir4 / name));
  }
}

TEST_CASE("run outputs are deterministic byte for byte") {
  const Scenario s =
      load_scenario(kScenarioDir / "example6_directed.json");
  const auto dir1 = fresh_dir("det1");
  const auto dir2 = fresh_dir("det2");
  const auto p1 = run_scenario(s, dir1);
  const auto p2 = run_scenario(s, dir2);
  CHECK(slurp(p1.trajectory_csv) == slurp(p2.trajectory_csv));
  CHECK(slurp(p1.summary_json) == slurp(p2.summary_json));
}

TEST_CASE("trajectory CSV has the contracted shape") {
  const Scenario s = load_scenario(kScenarioDir / "fig4_sigmoid.json");
  const auto dir = fresh_dir("csv");
  const auto paths = run_scenario(s, dir);
  std::ifstream in(paths.trajectory_csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header ==
        "t,x_0_a,x_0_b,x_1_a,x_1_b,x_2_a,x_2_b,y_0,y_1,y_2,phi,dphi_dt,"
        "field_inf_norm");
  // 1 + nA*nH + nA + 3 columns
  const std::size_t commas = std::count(header.begin(), header.end(), ',');
  CHECK(commas + 1 == 1u + 3u * 2u + 3u + 3u);
  std::string row;
  std::size_t rows = 0;
  while (std::getline(in, row)) {
    CHECK(std::count(row.begin(), row.end(), ',') == static_cast<long>(commas));
    ++rows;
  }
  CHECK(rows == 401);  // 4000 steps, every 10th, plus the initial sample
}

TEST_CASE("non-potential games leave the phi columns empty") {
  const Scenario s = load_scenario(kScenarioDir / "fig5_rps.json");
  const auto dir = fresh_dir("phi");
  const auto paths = run_scenario(s, dir);
  std::ifstream in(paths.trajectory_csv);
  std::string header, row;
  std::getline(in, header);
  REQUIRE(std::getline(in, row));
  // ...,phi,dphi_dt,field_inf_norm with phi and dphi_dt empty
  const auto tail = row.find(",,,");
  CHECK(tail != std::string::npos);
}

TEST_CASE("check preflight states hypotheses with reasons") {
  using nlohmann_like = std::string;
  const auto report_for = [&](const std::string& name) -> nlohmann_like {
    return check_json(load_scenario(kScenarioDir / (name + ".json")));
  };

  const auto sigmoid = report_for("fig4_sigmoid");
  CHECK(sigmoid.find("\"convergence_guarantee\"") != std::string::npos);
  CHECK(sigmoid.find("\"applicable\": true") != std::string::npos);
  CHECK(sigmoid.find("\"balanced_limit\": true") != std::string::npos);

  const auto rps = report_for("fig5_rps");
  CHECK(rps.find("game is not potential") != std::string::npos);

  const auto fig3 = report_for("fig3_example4");
  CHECK(fig3.find("not strongly connected") != std::string::npos);
}

TEST_CASE("equilibria command flags the disconnected cross state") {
  const auto text = equilibria_json(
      load_scenario(kScenarioDir / "fig3_example4.json"));
  const auto records = nlohmann::json::parse(text);
  REQUIRE(records.is_array());
  REQUIRE(records.size() == 3);
  bool found_cross = false;
  for (const auto& rec : records) {
    CHECK(rec["is_connected"] == false);
    CHECK(rec["field_norm"].get<double>() <= 1e-10);
    const auto& x = rec["x"];
    if (std::abs(x[0][1].get<double>() - 0.14) <= 1e-6 &&
        std::abs(x[1][1].get<double>() - 0.16) <= 1e-6) {
      found_cross = true;
      const auto& classes = rec["classes"];
      CHECK(std::find(classes.begin(), classes.end(), "restricted_nash") ==
            classes.end());
      CHECK(std::find(classes.begin(), classes.end(), "oracle_found") !=
            classes.end());
    }
  }
  CHECK(found_cross);
}

TEST_CASE("a single-action scenario yields one trivial record") {
  const std::string text = R"({
    "name": "monoculture",
    "game": {"name": "solo", "actions": ["only"], "A": [[0.0]], "b": [1.0]},
    "network": {"communities": ["a", "b"], "eta": [0.7, 0.3],
                "W": [[1.0, 0.2], [0.2, 1.0]]},
    "mechanism": {"type": "sigmoid", "K": 1.0},
    "initial_state": {"type": "balanced", "y": [1.0]},
    "integrator": {"t_end": 1.0},
    "equilibria": {"grid_density": 10}
  })";
  const auto records = nlohmann::json::parse(
      equilibria_json(parse_scenario(text)));
  REQUIRE(records.size() == 1);
  CHECK(records[0]["field_norm"].get<double>() == 0.0);
  const auto& classes = records[0]["classes"];
  CHECK(std::find(classes.begin(), classes.end(), "nash") != classes.end());
  CHECK(std::find(classes.begin(), classes.end(), "balanced") !=
        classes.end());
}

TEST_CASE("the bundled six-start sweep converges to one point") {
  const Scenario base = load_scenario(kScenarioDir / "fig4_sigmoid.json");
  const auto dir = fresh_dir("fig4sweep");
  const auto result = run_sweep(
      base, slurp(kScenarioDir / "sweeps" / "fig4_starts.json"), dir, 2);
  CHECK(result.runs == 6);
  for (int i = 0; i < 6; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "fig4_sigmoid_%03d.summary.json", i);
    const auto summary = nlohmann::json::parse(slurp(dir / name));
    CHECK(summary["analyses"][0]["converged"] == true);
    CHECK(summary["audit"]["all_pass"] == true);
  }
}

TEST_CASE("sweep runs the grid and indexes outputs") {
  const Scenario base =
      load_scenario(kScenarioDir / "example5_isolated.json");
  const auto dir = fresh_dir("sweep");
  const std::string overrides = R"({
    "grids": [
      {"path": "integrator.t_end", "values": [12.0, 15.0]},
      {"path": "integrator.record_every", "values": [5]}
    ]
  })";
  const auto result = run_sweep(base, overrides, dir, 2);
  CHECK(result.runs == 2);
  CHECK(fs::exists(result.index_json));
  CHECK(fs::exists(dir / "example5_isolated_000.trajectory.csv"));
  CHECK(fs::exists(dir / "example5_isolated_001.summary.json"));
  const auto index_text = slurp(result.index_json);
  CHECK(index_text.find("integrator.t_end") != std::string::npos);

  // an empty grid is a no-op, not an error
  const auto empty = run_sweep(base, R"({"grids": []})", dir, 1);
  CHECK(empty.runs == 0);
  CHECK(fs::exists(empty.index_json));
}

TEST_SUITE_END();
