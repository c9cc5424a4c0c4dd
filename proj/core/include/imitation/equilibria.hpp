#ifndef IMITATION_EQUILIBRIA_HPP
#define IMITATION_EQUILIBRIA_HPP

#include <set>
#include <string>
#include <vector>

#include "imitation/dynamics.hpp"
#include "imitation/game.hpp"
#include "imitation/mechanism.hpp"
#include "imitation/types.hpp"

namespace imitation {

/// One connected piece of the restricted-equilibrium set on a fixed support:
/// an affine solution set clipped to the simplex. Isolated solutions have no
/// directions; a one-dimensional kernel yields a segment whose endpoints are
/// stored in points.
struct RestrictedNashComponent {
  std::vector<int> support;
  Eigen::VectorXd base;              // a point of the clipped set
  Eigen::MatrixXd directions;        // orthonormal kernel basis (n x d)
  std::vector<Eigen::VectorXd> points;  // representative points

  bool is_point() const { return directions.cols() == 0; }

  /// Infinity-norm distance from y to the clipped set. Exact for points and
  /// segments; best-effort (coordinate search) for higher-dimensional sets.
  double distance(const Eigen::VectorXd& y) const;
};

/// All restricted equilibria of an affine game, one component per admissible
/// support: states where every played action earns the same reward. For each
/// nonempty support the reward-tie equations plus the mass constraint are
/// solved exactly; inconsistent supports contribute nothing. Games without
/// declared affine coefficients fall back to best-effort multistart root
/// finding per support (isolated solutions only).
std::vector<RestrictedNashComponent> restricted_nash_enumerate(
    const PopulationGame& game);

/// Representative points of all components, deduplicated.
std::vector<Eigen::VectorXd> restricted_nash_points(const PopulationGame& game);

/// Keeps the candidates where no unplayed action earns more than the played
/// ones (tolerance 1e-9): the equilibria of the full game.
std::vector<Eigen::VectorXd> nash_filter(
    const PopulationGame& game, const std::vector<Eigen::VectorXd>& candidates);

/// The limit set of the convergence theorem: the equilibria of the game
/// together with every simplex face of restricted equilibria that contains
/// an equilibrium.
struct LimitSet {
  std::vector<RestrictedNashComponent> components;
  std::vector<bool> from_nash;  // true: included as an equilibrium point

  double distance(const Eigen::VectorXd& y) const;
};
LimitSet y_circle(const PopulationGame& game);

enum class CharacterizationVerdict {
  consistent,
  violated,        // the equilibrium characterization failed: implementation bug
  inconclusive,    // mechanism fits neither characterization case
  not_applicable,  // hypotheses not met (disconnected network, no sign claim)
};

struct EquilibriumRecord {
  SystemState x;
  Eigen::VectorXd y;
  double field_norm = 0.0;
  std::set<std::string> classes;  // nash, restricted_nash, balanced,
                                  // theorem1_predicted, oracle_found
  bool network_connected = false;
  CharacterizationVerdict consistency = CharacterizationVerdict::consistent;
  std::string note;
};

/// Tags a state and cross-checks it against the equilibrium
/// characterization: on connected networks with sign-consistent mechanisms,
/// zero-field states must be restricted equilibria; balanced restricted
/// equilibria must be zero-field on every network; everywhere-positive rates
/// additionally force balance, zero-at-tie rates make every restricted
/// equilibrium stationary. A violated verdict indicates a bug, not bad input.
EquilibriumRecord classify_equilibrium(const SystemState& x,
                                       const PopulationGame& game,
                                       const CommunityNetwork& net,
                                       const ImitationMechanism& mech,
                                       double tol = 1e-9);

/// Brute-force equilibrium search: scans the field norm over a regular grid
/// (each community column a simplex grid of the given density scaled by
/// eta_h), refines the best candidates by damped Gauss-Newton descent on the
/// squared field norm, keeps refined states with field norm <= 1e-10,
/// deduplicates within 1e-6 and classifies each. Throws when the grid would
/// exceed 1e7 points.
std::vector<EquilibriumRecord> find_equilibria_numeric(
    const PopulationGame& game, const CommunityNetwork& net,
    const ImitationMechanism& mech, int grid_density);

}  // namespace imitation

#endif
