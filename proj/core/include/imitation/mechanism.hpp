#ifndef IMITATION_MECHANISM_HPP
#define IMITATION_MECHANISM_HPP

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace imitation {

/// How the rates behave where rewards tie. Drives the case split of the
/// equilibrium characterization (see equilibria.hpp).
enum class TieBehavior {
  positive_everywhere,   // f_ij(y) > 0 for every y and pair
  zero_at_equal_rewards, // f_ij(y) = 0 whenever r_i(y) = r_j(y)
  unknown,
};

/// Pairwise imitation rates f(y): entry (i, j) is the rate at which an
/// i-player copies an encountered j-player. Rates must be nonnegative and
/// finite on the simplex, and Lipschitz-continuous; Lipschitz-ness of
/// user-supplied callables is a caller obligation (it cannot be verified
/// numerically).
struct ImitationMechanism {
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> rates;
  bool claims_assumption1 = false;
  bool claims_assumption2 = false;
  TieBehavior tie_behavior = TieBehavior::unknown;
  std::string name;
};

}  // namespace imitation

#endif
