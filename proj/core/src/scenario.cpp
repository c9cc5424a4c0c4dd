#include "imitation/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "imitation/games.hpp"
#include "imitation/mechanisms.hpp"
#include "imitation/rng.hpp"
#include "parallel.hpp"

namespace imitation {

namespace {

using ordered_json = nlohmann::ordered_json;

Eigen::VectorXd vector_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioError(where + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ScenarioError(where + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ScenarioError(where + ": expected a non-empty array of rows");
  }
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ScenarioError(where + ": ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ScenarioError(where + ": expected numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<double>();
    }
  }
  return m;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

const ordered_json& require(const ordered_json& j, const std::string& key,
                            const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ScenarioError(where + ": missing field '" + key + "'");
  }
  return *it;
}

GameSpec parse_game(const ordered_json& j) {
  GameSpec g;
  if (j.contains("builtin")) {
    g.builtin = j["builtin"].get<std::string>();
    g.name = *g.builtin;
    return g;
  }
  g.actions = require(j, "actions", "game").get<std::vector<std::string>>();
  g.A = matrix_from_json(require(j, "A", "game"), "game.A");
  g.b = vector_from_json(require(j, "b", "game"), "game.b");
  if (j.contains("P") != j.contains("q")) {
    throw ScenarioError("game: P and q must be given together");
  }
  if (j.contains("P")) {
    g.P = matrix_from_json(j["P"], "game.P");
    g.q = vector_from_json(j["q"], "game.q");
  }
  g.name = j.value("name", std::string("custom"));
  return g;
}

MechanismSpec parse_mechanism(const ordered_json& j) {
  MechanismSpec m;
  m.type = require(j, "type", "mechanism").get<std::string>();
  if (j.contains("c")) m.c = j["c"].get<double>();
  if (j.contains("K")) {
    if (j["K"].is_number()) {
      m.k = j["K"].get<double>();
    } else {
      m.K = matrix_from_json(j["K"], "mechanism.K");
    }
  }
  return m;
}

InitialStateSpec parse_initial_state(const ordered_json& j) {
  InitialStateSpec s;
  const std::string type = require(j, "type", "initial_state").get<std::string>();
  if (type == "explicit") {
    s.kind = InitialStateSpec::Kind::explicit_matrix;
    s.x = matrix_from_json(require(j, "x", "initial_state"), "initial_state.x");
  } else if (type == "balanced") {
    s.kind = InitialStateSpec::Kind::balanced;
    s.y = vector_from_json(require(j, "y", "initial_state"), "initial_state.y");
  } else if (type == "random_interior") {
    s.kind = InitialStateSpec::Kind::random_interior;
    s.seed = require(j, "seed", "initial_state").get<std::uint64_t>();
  } else {
    throw ScenarioError("initial_state: unknown type '" + type + "'");
  }
  return s;
}

AnalysisSpec parse_analysis(const ordered_json& j) {
  AnalysisSpec a;
  a.type = require(j, "type", "analyses[]").get<std::string>();
  if (a.type == "convergence") {
    const auto& t = require(j, "target", "analyses[]");
    a.target_type = require(t, "type", "analyses[].target").get<std::string>();
    if (a.target_type == "point" || a.target_type == "balanced_point") {
      a.target_y = vector_from_json(require(t, "y", "analyses[].target"),
                                    "analyses[].target.y");
    } else if (a.target_type != "nash_set" && a.target_type != "y_circle") {
      throw ScenarioError("analyses[]: unknown target type '" + a.target_type +
                          "'");
    }
    a.threshold = require(j, "threshold", "analyses[]").get<double>();
    a.window = require(j, "window", "analyses[]").get<double>();
  } else if (a.type != "balancedness") {
    throw ScenarioError("analyses[]: unknown analysis type '" + a.type + "'");
  }
  return a;
}

Scenario parse_scenario_json(const ordered_json& j) {
  Scenario s;
  s.name = require(j, "name", "scenario").get<std::string>();
  if (s.name.empty()) throw ScenarioError("scenario: name must be non-empty");
  s.game = parse_game(require(j, "game", "scenario"));

  const auto& net = require(j, "network", "scenario");
  s.network.communities =
      require(net, "communities", "network").get<std::vector<std::string>>();
  s.network.eta = vector_from_json(require(net, "eta", "network"), "network.eta");
  s.network.W = matrix_from_json(require(net, "W", "network"), "network.W");

  s.mechanism = parse_mechanism(require(j, "mechanism", "scenario"));
  s.initial_state = parse_initial_state(require(j, "initial_state", "scenario"));

  const auto& integ = require(j, "integrator", "scenario");
  s.integrator.t_end = require(integ, "t_end", "integrator").get<double>();
  s.integrator.step = integ.value("step", 0.01);
  s.integrator.record_every = integ.value("record_every", 1);
  s.integrator.renorm_threshold = integ.value("renorm_threshold", 1e-9);
  s.integrator.clamp_floor = integ.value("clamp_floor", 1e-14);

  if (j.contains("analyses")) {
    for (const auto& a : j["analyses"]) s.analyses.push_back(parse_analysis(a));
  }
  if (j.contains("equilibria")) {
    s.equilibria.grid_density = j["equilibria"].value("grid_density", 20);
  }

  // structural validation before any numerics run
  try {
    const PopulationGame game = make_game(s.game);
    const CommunityNetwork network = make_network(s.network);
    const ImitationMechanism mech = make_mechanism(s.mechanism, game);
    (void)mech;
    (void)make_initial_state(s.initial_state, network, game.n_actions());
    s.integrator.validate();
    for (const auto& a : s.analyses) {
      if (a.target_y &&
          a.target_y->size() != game.n_actions()) {
        throw ScenarioError("analyses[]: target dimension mismatch");
      }
      if (a.type == "convergence") {
        if (!(a.threshold > 0.0)) {
          throw ScenarioError("analyses[]: threshold must be > 0");
        }
        if (!(a.window > 0.0) || a.window > s.integrator.t_end) {
          throw ScenarioError("analyses[]: window must lie in (0, t_end]");
        }
      }
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  return parse_scenario_json(j);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["name"] = s.name;

  ordered_json game;
  if (s.game.builtin) {
    game["builtin"] = *s.game.builtin;
  } else {
    game["name"] = s.game.name;
    game["actions"] = *s.game.actions;
    game["A"] = matrix_to_json(*s.game.A);
    game["b"] = vector_to_json(*s.game.b);
    if (s.game.P) {
      game["P"] = matrix_to_json(*s.game.P);
      game["q"] = vector_to_json(*s.game.q);
    }
  }
  j["game"] = game;

  ordered_json net;
  net["communities"] = s.network.communities;
  net["eta"] = vector_to_json(s.network.eta);
  net["W"] = matrix_to_json(s.network.W);
  j["network"] = net;

  ordered_json mech;
  mech["type"] = s.mechanism.type;
  if (s.mechanism.c) mech["c"] = *s.mechanism.c;
  if (s.mechanism.k) mech["K"] = *s.mechanism.k;
  if (s.mechanism.K) mech["K"] = matrix_to_json(*s.mechanism.K);
  j["mechanism"] = mech;

  ordered_json init;
  switch (s.initial_state.kind) {
    case InitialStateSpec::Kind::explicit_matrix:
      init["type"] = "explicit";
      init["x"] = matrix_to_json(*s.initial_state.x);
      break;
    case InitialStateSpec::Kind::balanced:
      init["type"] = "balanced";
      init["y"] = vector_to_json(*s.initial_state.y);
      break;
    case InitialStateSpec::Kind::random_interior:
      init["type"] = "random_interior";
      init["seed"] = s.initial_state.seed;
      break;
  }
  j["initial_state"] = init;

  ordered_json integ;
  integ["step"] = s.integrator.step;
  integ["t_end"] = s.integrator.t_end;
  integ["record_every"] = s.integrator.record_every;
  integ["renorm_threshold"] = s.integrator.renorm_threshold;
  integ["clamp_floor"] = s.integrator.clamp_floor;
  j["integrator"] = integ;

  ordered_json analyses = ordered_json::array();
  for (const auto& a : s.analyses) {
    ordered_json aj;
    aj["type"] = a.type;
    if (a.type == "convergence") {
      ordered_json target;
      target["type"] = a.target_type;
      if (a.target_y) target["y"] = vector_to_json(*a.target_y);
      aj["target"] = target;
      aj["threshold"] = a.threshold;
      aj["window"] = a.window;
    }
    analyses.push_back(aj);
  }
  j["analyses"] = analyses;

  ordered_json eq;
  eq["grid_density"] = s.equilibria.grid_density;
  j["equilibria"] = eq;
  return j;
}

}  // namespace

std::string canonical_json(const Scenario& s) {
  return scenario_to_json(s).dump(2) + "\n";
}

PopulationGame make_game(const GameSpec& spec) {
  if (spec.builtin) {
    if (*spec.builtin == "constant_reward") return constant_reward_game();
    if (*spec.builtin == "anticoordination") return anticoordination_game();
    if (*spec.builtin == "congestion") return congestion_game();
    if (*spec.builtin == "rps") return rps_game();
    throw ScenarioError("game: unknown builtin '" + *spec.builtin + "'");
  }
  if (!spec.actions || !spec.A || !spec.b) {
    throw ScenarioError("game: declarative form needs actions, A and b");
  }
  std::optional<QuadraticPotential> phi;
  if (spec.P) phi = QuadraticPotential{*spec.P, *spec.q};
  try {
    return make_affine_game(ActionSet(*spec.actions),
                            AffineReward{*spec.A, *spec.b}, std::move(phi),
                            spec.name);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("game: ") + e.what());
  }
}

CommunityNetwork make_network(const NetworkSpec& spec) {
  try {
    return CommunityNetwork(spec.communities, spec.eta, spec.W);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("network: ") + e.what());
  }
}

ImitationMechanism make_mechanism(const MechanismSpec& spec,
                                  const PopulationGame& game) {
  try {
    if (spec.type == "replicator") {
      return spec.c ? replicator_mechanism(game, *spec.c)
                    : replicator_mechanism(game);
    }
    if (spec.type == "pairwise_proportional") {
      return pairwise_proportional_mechanism(game);
    }
    if (spec.type == "sigmoid") {
      if (spec.K) return sigmoid_mechanism(game, *spec.K);
      return sigmoid_mechanism(game, spec.k.value_or(1.0));
    }
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("mechanism: ") + e.what());
  }
  throw ScenarioError("mechanism: unknown type '" + spec.type + "'");
}

SystemState make_initial_state(const InitialStateSpec& spec,
                               const CommunityNetwork& net, int n_actions) {
  try {
    switch (spec.kind) {
      case InitialStateSpec::Kind::explicit_matrix: {
        if (spec.x->rows() != n_actions || spec.x->cols() != net.size()) {
          throw ScenarioError("initial_state: x dimension mismatch");
        }
        return SystemState(*spec.x, net);
      }
      case InitialStateSpec::Kind::balanced: {
        if (spec.y->size() != n_actions) {
          throw ScenarioError("initial_state: y dimension mismatch");
        }
        return balanced_state(PopulationState(*spec.y), net);
      }
      case InitialStateSpec::Kind::random_interior: {
        Rng rng(spec.seed);
        Eigen::MatrixXd x(n_actions, net.size());
        for (int h = 0; h < net.size(); ++h) {
          x.col(h) = net.eta()[h] * rng.simplex(n_actions);
        }
        return SystemState(x, net);
      }
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("initial_state: ") + e.what());
  }
  throw ScenarioError("initial_state: unreachable");
}

namespace {

std::string num17(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string trajectory_csv(const Trajectory& traj, const PopulationGame& game,
                           const CommunityNetwork& net) {
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < game.n_actions(); ++i) {
    for (int h = 0; h < net.size(); ++h) {
      out << ",x_" << game.actions.label(i) << "_" << net.communities()[h];
    }
  }
  for (int i = 0; i < game.n_actions(); ++i) {
    out << ",y_" << game.actions.label(i);
  }
  out << ",phi,dphi_dt,field_inf_norm\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << num17(traj.times[k]);
    for (int i = 0; i < game.n_actions(); ++i) {
      for (int h = 0; h < net.size(); ++h) {
        out << "," << num17(traj.states[k].mat()(i, h));
      }
    }
    for (int i = 0; i < game.n_actions(); ++i) {
      out << "," << num17(traj.population[k][i]);
    }
    out << "," << num17(traj.phi[k]) << "," << num17(traj.dphi_dt[k]) << ","
        << num17(traj.field_inf_norm[k]) << "\n";
  }
  return out.str();
}

ordered_json audit_to_json(const AuditReport& audit) {
  auto check = [](const AuditCheck& c) {
    ordered_json j;
    j["applicable"] = c.applicable;
    j["pass"] = c.pass;
    j["first_violation"] = c.first_violation;
    return j;
  };
  ordered_json j;
  j["column_conservation"] = check(audit.column_conservation);
  j["support_constant"] = check(audit.support_constant);
  j["potential_monotone"] = check(audit.potential_monotone);
  j["simplex_containment"] = check(audit.simplex_containment);
  j["all_pass"] = audit.all_pass();
  return j;
}

ConvergenceTarget make_target(const AnalysisSpec& a, const PopulationGame& game,
                              const CommunityNetwork& net) {
  if (a.target_type == "point") {
    return PointTarget{*a.target_y, "point"};
  }
  if (a.target_type == "balanced_point") {
    return XTarget{*a.target_y * net.eta().transpose(), "balanced_point"};
  }
  if (a.target_type == "nash_set") {
    LimitSet set;
    for (const auto& y :
         nash_filter(game, restricted_nash_points(game))) {
      RestrictedNashComponent comp;
      comp.support = support_of(y);
      comp.base = y;
      comp.directions = Eigen::MatrixXd::Zero(game.n_actions(), 0);
      comp.points = {y};
      set.components.push_back(std::move(comp));
      set.from_nash.push_back(true);
    }
    if (set.components.empty()) {
      throw ScenarioError("analyses[]: nash_set target found no equilibria");
    }
    return SetTarget{std::move(set), "nash_set"};
  }
  return SetTarget{y_circle(game), "y_circle"};
}

ordered_json convergence_to_json(const ConvergenceReport& rep) {
  ordered_json j;
  j["type"] = "convergence";
  j["target"] = rep.target;
  j["converged"] = rep.converged;
  j["final_distance"] = rep.final_distance;
  j["time_of_convergence"] = rep.time_of_convergence
                                 ? ordered_json(*rep.time_of_convergence)
                                 : ordered_json(nullptr);
  j["oscillation_detected"] = rep.oscillation_detected;
  j["min_distance_tail"] = rep.min_distance_tail;
  j["threshold"] = rep.threshold;
  j["window"] = rep.window;
  return j;
}

}  // namespace

RunPaths run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  const PopulationGame game = make_game(s.game);
  const CommunityNetwork net = make_network(s.network);
  const ImitationMechanism mech = make_mechanism(s.mechanism, game);
  const SystemState x0 = make_initial_state(s.initial_state, net,
                                            game.n_actions());

  const Trajectory traj = integrate(x0, game, net, mech, s.integrator);

  std::filesystem::create_directories(out_dir);
  RunPaths paths{out_dir / (s.name + ".trajectory.csv"),
                 out_dir / (s.name + ".summary.json")};
  write_file(paths.trajectory_csv, trajectory_csv(traj, game, net));

  const std::size_t last = traj.size() - 1;
  const auto deviation = balancedness_deviation(traj, net);

  ordered_json summary;
  summary["scenario"] = s.name;
  summary["t_end"] = s.integrator.t_end;
  summary["samples"] = traj.size();

  ordered_json final_state;
  final_state["t"] = traj.times[last];
  final_state["x"] = matrix_to_json(traj.states[last].mat());
  final_state["y"] = vector_to_json(traj.population[last]);
  final_state["phi"] = number_or_null(traj.phi[last]);
  final_state["dphi_dt"] = number_or_null(traj.dphi_dt[last]);
  final_state["field_inf_norm"] = traj.field_inf_norm[last];
  final_state["balancedness_deviation"] = deviation[last];
  summary["final"] = final_state;

  ordered_json analyses = ordered_json::array();
  for (const auto& a : s.analyses) {
    if (a.type == "convergence") {
      const auto rep = convergence_report(traj, make_target(a, game, net),
                                          a.threshold, a.window);
      analyses.push_back(convergence_to_json(rep));
    } else {
      double max_dev = 0.0, tail_max = 0.0;
      for (std::size_t k = 0; k < deviation.size(); ++k) {
        max_dev = std::max(max_dev, deviation[k]);
        if (traj.times[k] >= 0.5 * traj.times.back()) {
          tail_max = std::max(tail_max, deviation[k]);
        }
      }
      ordered_json j;
      j["type"] = "balancedness";
      j["final"] = deviation.back();
      j["max"] = max_dev;
      j["tail_max"] = tail_max;
      analyses.push_back(j);
    }
  }
  summary["analyses"] = analyses;
  summary["audit"] = audit_to_json(invariant_audit(traj, game, net, mech));

  write_file(paths.summary_json, summary.dump(2) + "\n");
  return paths;
}

namespace {

std::string verdict_name(CharacterizationVerdict v) {
  switch (v) {
    case CharacterizationVerdict::consistent: return "consistent";
    case CharacterizationVerdict::violated: return "violated";
    case CharacterizationVerdict::inconclusive: return "inconclusive";
    case CharacterizationVerdict::not_applicable: return "not_applicable";
  }
  return "unknown";
}

ordered_json record_to_json(const EquilibriumRecord& rec) {
  ordered_json j;
  j["x"] = matrix_to_json(rec.x.mat());
  j["y"] = vector_to_json(rec.y);
  j["field_norm"] = rec.field_norm;
  j["classes"] = rec.classes;
  j["is_connected"] = rec.network_connected;
  j["consistency"] = verdict_name(rec.consistency);
  j["note"] = rec.note;
  return j;
}

}  // namespace

std::string equilibria_json(const Scenario& s) {
  const PopulationGame game = make_game(s.game);
  const CommunityNetwork net = make_network(s.network);
  const ImitationMechanism mech = make_mechanism(s.mechanism, game);

  std::vector<EquilibriumRecord> records;
  if (game.affine) {
    for (const auto& y : restricted_nash_points(game)) {
      records.push_back(classify_equilibrium(
          balanced_state(PopulationState(y), net), game, net, mech));
    }
  }
  for (auto& rec : find_equilibria_numeric(game, net, mech,
                                           s.equilibria.grid_density)) {
    bool merged = false;
    for (auto& existing : records) {
      if ((existing.x.mat() - rec.x.mat()).cwiseAbs().maxCoeff() <= 1e-6) {
        existing.classes.insert(rec.classes.begin(), rec.classes.end());
        merged = true;
        break;
      }
    }
    if (!merged) records.push_back(std::move(rec));
  }

  std::sort(records.begin(), records.end(),
            [](const EquilibriumRecord& a, const EquilibriumRecord& b) {
              const auto sup_a = support_of(a.y), sup_b = support_of(b.y);
              if (sup_a != sup_b) return sup_a < sup_b;
              for (Eigen::Index i = 0; i < a.y.size(); ++i) {
                if (a.y[i] != b.y[i]) return a.y[i] < b.y[i];
              }
              for (Eigen::Index i = 0; i < a.x.mat().size(); ++i) {
                if (a.x.mat()(i) != b.x.mat()(i)) {
                  return a.x.mat()(i) < b.x.mat()(i);
                }
              }
              return false;
            });

  ordered_json out = ordered_json::array();
  for (const auto& rec : records) out.push_back(record_to_json(rec));
  return out.dump(2) + "\n";
}

std::string check_json(const Scenario& s) {
  const PopulationGame game = make_game(s.game);
  const CommunityNetwork net = make_network(s.network);
  const ImitationMechanism mech = make_mechanism(s.mechanism, game);

  const bool connected = is_connected(net);
  const bool undirected = is_undirected(net);

  const auto a1 = check_assumption1(mech, game, 2000, 20260808);
  const auto a2 = check_assumption2(mech, game, 2000, 20260808);

  ordered_json j;
  j["scenario"] = s.name;

  ordered_json network;
  network["connected"] = connected;
  network["undirected"] = undirected;
  j["network"] = network;

  ordered_json mechanism;
  mechanism["name"] = mech.name;
  mechanism["claims_assumption1"] = mech.claims_assumption1;
  mechanism["claims_assumption2"] = mech.claims_assumption2;
  auto assumption_to_json = [](const AssumptionReport& rep) {
    ordered_json a;
    a["holds_on_samples"] = rep.holds_on_samples;
    a["samples_tested"] = rep.samples_tested;
    if (rep.counterexample) {
      ordered_json w;
      w["y"] = vector_to_json(rep.counterexample->y);
      w["actions"] = rep.counterexample->actions;
      w["rates"] = rep.counterexample->rates;
      w["rewards"] = rep.counterexample->rewards;
      a["counterexample"] = w;
    }
    return a;
  };
  mechanism["assumption1"] = assumption_to_json(a1);
  mechanism["assumption2"] = assumption_to_json(a2);
  j["mechanism"] = mechanism;

  ordered_json game_j;
  game_j["name"] = game.name;
  game_j["potential_declared"] = game.potential.has_value();
  if (game.potential) {
    const auto pc = check_potential(game, 200, 20260808);
    ordered_json p;
    p["ok"] = pc.ok;
    p["max_error"] = pc.max_error;
    game_j["potential_check"] = p;
  } else {
    game_j["potential_check"] = nullptr;
  }
  bool all_nash_interior = true;
  ordered_json nash_points = ordered_json::array();
  if (game.affine) {
    for (const auto& y : nash_filter(game, restricted_nash_points(game))) {
      nash_points.push_back(vector_to_json(y));
      if (support_of(y).size() != static_cast<std::size_t>(game.n_actions())) {
        all_nash_interior = false;
      }
    }
  }
  game_j["nash_points"] = nash_points;
  game_j["all_nash_full_support"] = all_nash_interior;
  j["game"] = game_j;

  // hypotheses of the equilibrium characterization
  ordered_json characterization;
  std::vector<std::string> reasons;
  if (!connected) reasons.push_back("network is not strongly connected");
  if (!mech.claims_assumption1 || !a1.holds_on_samples) {
    reasons.push_back("mechanism fails the sign-consistency assumption");
  }
  characterization["applicable"] = reasons.empty();
  characterization["case"] =
      mech.tie_behavior == TieBehavior::positive_everywhere
          ? "positive_rates"
          : (mech.tie_behavior == TieBehavior::zero_at_equal_rewards
                 ? "zero_at_reward_ties"
                 : "general");
  characterization["reasons"] = reasons;
  j["characterization"] = characterization;

  // hypotheses of the global convergence result for potential games
  ordered_json convergence;
  std::vector<std::string> conv_reasons;
  if (!game.potential) conv_reasons.push_back("game is not potential");
  if (!undirected) conv_reasons.push_back("network is not undirected");
  if (!connected) conv_reasons.push_back("network is not strongly connected");
  if (!mech.claims_assumption1 || !a1.holds_on_samples) {
    conv_reasons.push_back("mechanism fails the sign-consistency assumption");
  }
  convergence["applicable"] = conv_reasons.empty();
  convergence["reasons"] = conv_reasons;
  j["convergence_guarantee"] = convergence;

  // single-equilibrium convergence: additionally every equilibrium interior
  ordered_json nash_conv;
  std::vector<std::string> nash_reasons = conv_reasons;
  if (!game.affine) {
    nash_reasons.push_back("no declarative reward form; equilibria unknown");
  } else if (nash_points.empty()) {
    nash_reasons.push_back("no equilibrium found");
  } else if (!all_nash_interior) {
    nash_reasons.push_back("an equilibrium lies on the simplex boundary");
  }
  nash_conv["applicable"] = nash_reasons.empty();
  const bool balanced_limit =
      nash_reasons.empty() && mech.claims_assumption2 && a2.holds_on_samples;
  nash_conv["balanced_limit"] = balanced_limit;
  nash_conv["reasons"] = nash_reasons;
  j["nash_convergence"] = nash_conv;

  return j.dump(2) + "\n";
}

SweepResult run_sweep(const Scenario& base, const std::string& overrides_json,
                      const std::filesystem::path& out_dir, int workers) {
  ordered_json overrides;
  try {
    overrides = ordered_json::parse(overrides_json);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("overrides: invalid JSON: ") + e.what());
  }

  struct Grid {
    std::string path;
    std::vector<ordered_json> values;
  };
  std::vector<Grid> grids;
  if (overrides.contains("grids")) {
    for (const auto& g : overrides["grids"]) {
      Grid grid;
      grid.path = require(g, "path", "overrides.grids[]").get<std::string>();
      for (const auto& v : require(g, "values", "overrides.grids[]")) {
        grid.values.push_back(v);
      }
      if (grid.values.empty()) {
        throw ScenarioError("overrides: grid '" + grid.path + "' is empty");
      }
      grids.push_back(std::move(grid));
    }
  }

  std::filesystem::create_directories(out_dir);

  long combos = grids.empty() ? 0 : 1;
  for (const auto& g : grids) combos *= static_cast<long>(g.values.size());

  const ordered_json base_json = ordered_json::parse(canonical_json(base));
  struct RunEntry {
    ordered_json overrides;
    Scenario scenario;
  };
  std::vector<RunEntry> entries;
  for (long c = 0; c < combos; ++c) {
    ordered_json doc = base_json;
    ordered_json applied = ordered_json::object();
    long rem = c;
    for (const auto& g : grids) {
      const long idx = rem % static_cast<long>(g.values.size());
      rem /= static_cast<long>(g.values.size());
      // dotted path into the scenario document
      ordered_json* node = &doc;
      std::string segment;
      std::istringstream path(g.path);
      std::vector<std::string> parts;
      while (std::getline(path, segment, '.')) parts.push_back(segment);
      for (std::size_t p = 0; p + 1 < parts.size(); ++p) {
        node = &(*node)[parts[p]];
      }
      (*node)[parts.back()] = g.values[idx];
      applied[g.path] = g.values[idx];
    }
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_%03ld", c);
    doc["name"] = base.name + suffix;
    entries.push_back(RunEntry{applied, parse_scenario_json(doc)});
  }

  std::vector<RunPaths> outputs(entries.size());
  std::exception_ptr first_error;
  std::mutex error_mu;
  detail::parallel_chunks(
      static_cast<std::int64_t>(entries.size()),
      workers > 0 ? workers : detail::default_workers(),
      [&](int, std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
          try {
            outputs[static_cast<std::size_t>(i)] =
                run_scenario(entries[static_cast<std::size_t>(i)].scenario,
                             out_dir);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
  if (first_error) std::rethrow_exception(first_error);

  ordered_json index;
  index["scenario"] = base.name;
  ordered_json runs = ordered_json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ordered_json r;
    r["index"] = i;
    r["overrides"] = entries[i].overrides;
    r["trajectory_csv"] = outputs[i].trajectory_csv.filename().string();
    r["summary_json"] = outputs[i].summary_json.filename().string();
    runs.push_back(r);
  }
  index["runs"] = runs;

  SweepResult result;
  result.index_json = out_dir / (base.name + ".sweep_index.json");
  result.runs = static_cast<int>(entries.size());
  write_file(result.index_json, index.dump(2) + "\n");
  return result;
}

}  // namespace imitation
