#ifndef IMITATION_TESTS_HELPERS_HPP
#define IMITATION_TESTS_HELPERS_HPP

#include <Eigen/Dense>
#include <vector>

#include "imitation/game.hpp"
#include "imitation/rng.hpp"
#include "imitation/types.hpp"

namespace testutil {

// two communities a (0.7) and b (0.3) with symmetric cross weight 0.2
inline imitation::CommunityNetwork figure_network() {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, 0.2, 0.2, 1.0;
  return imitation::CommunityNetwork({"a", "b"}, Eigen::Vector2d(0.7, 0.3), w);
}

// one-way coupling b <- a, used by the disconnected-network counterexamples
inline imitation::CommunityNetwork one_way_network() {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, 0.0, 0.2, 1.0;
  return imitation::CommunityNetwork({"a", "b"}, Eigen::Vector2d(0.7, 0.3), w);
}

inline imitation::CommunityNetwork isolated_network() {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
  return imitation::CommunityNetwork({"a", "b"}, Eigen::Vector2d(0.7, 0.3), w);
}

inline imitation::CommunityNetwork single_community() {
  return imitation::CommunityNetwork({"all"}, Eigen::VectorXd::Ones(1),
                                     Eigen::MatrixXd::Ones(1, 1));
}

inline imitation::SystemState random_state(const imitation::CommunityNetwork& net,
                                           int n_actions, imitation::Rng& rng) {
  Eigen::MatrixXd x(n_actions, net.size());
  for (int h = 0; h < net.size(); ++h) {
    x.col(h) = net.eta()[h] * rng.simplex(n_actions);
  }
  return imitation::SystemState(x, net);
}

// Constant-reward game with the given reward vector; affine with A = 0.
inline imitation::PopulationGame fixed_reward_game(Eigen::VectorXd rewards) {
  std::vector<std::string> labels;
  for (int i = 0; i < rewards.size(); ++i) labels.push_back(std::to_string(i));
  const int n = static_cast<int>(rewards.size());
  return imitation::make_affine_game(
      imitation::ActionSet(labels),
      imitation::AffineReward{Eigen::MatrixXd::Zero(n, n), std::move(rewards)},
      std::nullopt, "fixed_reward");
}

// Moves mass between two supported actions across two communities, keeping
// both the row sums (y) and the column sums (eta) intact.
inline imitation::SystemState fiber_shift(const imitation::SystemState& x,
                                          const imitation::CommunityNetwork& net,
                                          int action_a, int action_b,
                                          double fraction = 0.25) {
  Eigen::MatrixXd m = x.mat();
  const double delta =
      fraction * std::min(m(action_b, 0), m(action_a, 1));
  m(action_a, 0) += delta;
  m(action_b, 0) -= delta;
  m(action_a, 1) -= delta;
  m(action_b, 1) += delta;
  return imitation::SystemState(m, net);
}

}  // namespace testutil

#endif
