#ifndef IMITATION_GAME_HPP
#define IMITATION_GAME_HPP

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "imitation/types.hpp"

namespace imitation {

/// r(y) = b + A y
struct AffineReward {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

/// phi(y) = y' P y + q' y  (defined up to an additive constant)
struct QuadraticPotential {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
};

/// A continuous population game: per-action rewards as a function of the
/// population state. Reward and potential callables must accept any vector
/// in a neighborhood of the simplex within its affine hull (finite-difference
/// probes stay inside for interior points).
struct PopulationGame {
  using RewardFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using PotentialFn = std::function<double(const Eigen::VectorXd&)>;

  ActionSet actions;
  RewardFn reward;
  std::optional<PotentialFn> potential;
  std::optional<AffineReward> affine;
  std::optional<QuadraticPotential> quadratic;
  std::string name;

  int n_actions() const { return actions.size(); }
  Eigen::VectorXd rewards(const Eigen::VectorXd& y) const { return reward(y); }
};

/// Build a game from declarative coefficients. The potential, when given,
/// is attached both as a callable and as coefficients.
PopulationGame make_affine_game(ActionSet actions, AffineReward r,
                                std::optional<QuadraticPotential> phi,
                                std::string name);

}  // namespace imitation

#endif
