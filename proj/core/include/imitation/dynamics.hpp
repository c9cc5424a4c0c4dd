#ifndef IMITATION_DYNAMICS_HPP
#define IMITATION_DYNAMICS_HPP

#include <stdexcept>
#include <vector>

#include "imitation/game.hpp"
#include "imitation/mechanism.hpp"
#include "imitation/types.hpp"

namespace imitation {

/// Raised when the integrator detects a state escaping the admissible set or
/// a non-finite field evaluation.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-hand side of the imitation dynamics:
///   xdot_ih = sum_{j,k} ( x_jh W_hk x_ik f_ji(y) - x_ih W_hk x_jk f_ij(y) )
/// with y the row sums of x. Column sums of the result vanish (mass is
/// conserved within each community).
Eigen::MatrixXd vector_field(const SystemState& x, const PopulationGame& game,
                             const CommunityNetwork& net,
                             const ImitationMechanism& mech);

/// Network-weighted encounter rates Lambda_ij = sum_{h,k} x_ih W_hk x_jk;
/// symmetric whenever W is.
Eigen::MatrixXd lambda_matrix(const SystemState& x,
                              const CommunityNetwork& net);

/// Aggregated population derivative ydot_i = sum_j (Lambda_ji f_ji -
/// Lambda_ij f_ij); equals the row sums of vector_field.
Eigen::VectorXd population_derivative(const SystemState& x,
                                      const PopulationGame& game,
                                      const CommunityNetwork& net,
                                      const ImitationMechanism& mech);

/// Time derivative of the potential along the flow, in closed form:
///   (1/2) sum_{i,j} Lambda_ij (f_ji - f_ij) (r_i - r_j).
/// Requires a potential game and an undirected network (the symmetrization
/// needs Lambda = Lambda^T).
double potential_derivative(const SystemState& x, const PopulationGame& game,
                            const CommunityNetwork& net,
                            const ImitationMechanism& mech);

struct IntegratorSettings {
  double step = 0.01;
  double t_end = 0.0;  // required, > 0
  int record_every = 1;
  double renorm_threshold = 1e-9;
  double clamp_floor = 1e-14;

  void validate() const;
};

/// Fixed-step trajectory record. phi / dphi_dt hold NaN where unavailable
/// (no potential; dphi_dt additionally requires an undirected network).
/// column_drift[k] is the largest column-sum deviation observed since the
/// previous recorded sample, measured before any renormalization.
struct Trajectory {
  std::vector<double> times;
  std::vector<SystemState> states;
  std::vector<Eigen::VectorXd> population;
  std::vector<double> phi;
  std::vector<double> dphi_dt;
  std::vector<double> field_inf_norm;
  std::vector<double> column_drift;

  std::size_t size() const { return times.size(); }
};

/// Classical fixed-step 4th-order Runge-Kutta on the imitation dynamics.
/// Tiny negative entries produced by rounding are clamped back to zero;
/// entries below -1e-6 abort (that signals a field bug or an oversized
/// step, never legitimate dynamics). Community columns are rescaled to
/// their exact sizes whenever drift exceeds renorm_threshold; rescaling
/// preserves zeros, so the support of the initial state is kept exactly.
Trajectory integrate(const SystemState& x0, const PopulationGame& game,
                     const CommunityNetwork& net,
                     const ImitationMechanism& mech,
                     const IntegratorSettings& settings);

}  // namespace imitation

#endif
