#ifndef IMITATION_ANALYSIS_HPP
#define IMITATION_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "imitation/dynamics.hpp"
#include "imitation/equilibria.hpp"

namespace imitation {

/// Convergence is judged on the population state by default; an x-level
/// target expresses the balanced-limit claim.
struct PointTarget {
  Eigen::VectorXd y;
  std::string description;
};
struct XTarget {
  Eigen::MatrixXd x;
  std::string description;
};
struct SetTarget {
  LimitSet set;
  std::string description;
};
using ConvergenceTarget = std::variant<PointTarget, XTarget, SetTarget>;

struct ConvergenceReport {
  bool converged = false;
  std::string target;
  double final_distance = 0.0;
  std::optional<double> time_of_convergence;
  bool oscillation_detected = false;
  double min_distance_tail = 0.0;  // over the final 50% of the trajectory
  double threshold = 0.0;
  double window = 0.0;
};

/// Converged iff the distance to the target stays within threshold over the
/// trailing time window. The oscillation flag is a heuristic: a
/// non-converged tail whose distance swings by more than five thresholds
/// and repeatedly changes direction. Distances are infinity-norm.
ConvergenceReport convergence_report(const Trajectory& traj,
                                     const ConvergenceTarget& target,
                                     double threshold, double window);

/// Per-sample distance from balance: ||x(t) - y(t) eta^T||_inf.
std::vector<double> balancedness_deviation(const Trajectory& traj,
                                           const CommunityNetwork& net);

/// Probes the neighborhood of a restricted (non-Nash) equilibrium state:
/// identifies an unplayed action beating every played one and returns true
/// iff its population share strictly grows at every sampled nearby state
/// that plays it. Requires an undirected connected network and a
/// sign-consistent mechanism.
bool boundary_repulsion_check(const PopulationGame& game,
                              const CommunityNetwork& net,
                              const ImitationMechanism& mech,
                              const SystemState& x_bullet, double eps_probe,
                              int n_probes, std::uint64_t seed);

struct AuditCheck {
  bool applicable = false;
  bool pass = true;
  long first_violation = -1;  // sample index
};

struct AuditReport {
  AuditCheck column_conservation;  // pre-renormalization drift <= 1e-8
  AuditCheck support_constant;     // support equals the initial support
  AuditCheck potential_monotone;   // phi nondecreasing, dphi/dt >= -1e-10
  AuditCheck simplex_containment;  // y within the simplex to 1e-10

  bool all_pass() const {
    for (const AuditCheck* c : {&column_conservation, &support_constant,
                                &potential_monotone, &simplex_containment}) {
      if (c->applicable && !c->pass) return false;
    }
    return true;
  }
};

/// Replays the recorded trajectory against the structural invariants of the
/// dynamics. The potential check applies only to potential games on
/// undirected connected networks with sign-consistent mechanisms.
AuditReport invariant_audit(const Trajectory& traj, const PopulationGame& game,
                            const CommunityNetwork& net,
                            const ImitationMechanism& mech);

}  // namespace imitation

#endif
