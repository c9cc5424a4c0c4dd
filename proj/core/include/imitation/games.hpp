#ifndef IMITATION_GAMES_HPP
#define IMITATION_GAMES_HPP

#include <cstdint>

#include "imitation/game.hpp"

namespace imitation {

/// Two actions with constant rewards 0 and 1; action 1 is strictly dominant.
PopulationGame constant_reward_game();

/// Two actions, each rewarded by the share of the other: r_0 = y_1,
/// r_1 = 1 - y_1. Interior equilibrium at (1/2, 1/2).
PopulationGame anticoordination_game();

/// Three-action congestion game: r_i = -(2i+2) y_i, potential
/// -y_0^2 - 2 y_1^2 - 3 y_2^2, unique equilibrium (6/11, 3/11, 2/11).
PopulationGame congestion_game();

/// Rock-paper-scissors; cyclic rewards, no potential.
PopulationGame rps_game();

struct PotentialCheck {
  bool ok = false;
  double max_error = 0.0;
  // worst sampled discrepancy, for diagnostics
  Eigen::VectorXd worst_y;
  int worst_i = -1;
  int worst_j = -1;
};

/// Verifies the declared potential against the rewards by central finite
/// differences along simplex-tangent directions e_j - e_i: at interior
/// samples, r_j(y) - r_i(y) must match [phi(y + h d) - phi(y - h d)] / 2h
/// within 1e-5. Throws if the game declares no potential.
PotentialCheck check_potential(const PopulationGame& game, int n_samples,
                               std::uint64_t seed, double h_fd = 1e-6);

}  // namespace imitation

#endif
