#ifndef IMITATION_MECHANISMS_HPP
#define IMITATION_MECHANISMS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "imitation/game.hpp"
#include "imitation/mechanism.hpp"

namespace imitation {

// Sign comparisons treat magnitudes below this as zero: assumption 1 is an
// exact-arithmetic statement and floating-point ties would otherwise produce
// spurious violations.
inline constexpr double kSignTol = 1e-9;

/// f_ij(y) = c + r_j(y). Throws if c yields a negative rate at any of 1000
/// sampled states.
ImitationMechanism replicator_mechanism(const PopulationGame& game, double c);

/// As above with c = 1 + max sampled |r| over 1000 simplex samples.
ImitationMechanism replicator_mechanism(const PopulationGame& game);

/// f_ij(y) = max{r_j(y) - r_i(y), 0}.
ImitationMechanism pairwise_proportional_mechanism(const PopulationGame& game);

/// f_ij(y) = 1 / (1 + exp(-K_ij (r_j(y) - r_i(y)))), all K_ij > 0.
ImitationMechanism sigmoid_mechanism(const PopulationGame& game,
                                     const Eigen::MatrixXd& K);
ImitationMechanism sigmoid_mechanism(const PopulationGame& game, double k);

struct AssumptionWitness {
  Eigen::VectorXd y;
  std::vector<int> actions;     // the offending pair or triple
  std::vector<double> rates;    // rate values at the witness state
  std::vector<double> rewards;  // reward values at the witness state
};

struct AssumptionReport {
  int assumption_id = 0;  // 1 or 2
  bool holds_on_samples = true;
  std::optional<AssumptionWitness> counterexample;
  long samples_tested = 0;
};

/// Sampled check of assumption 1: at states drawn uniformly from the
/// simplex, sgn(f_ij - f_ji) must equal sgn(r_j - r_i) for every ordered
/// pair (signs taken with tolerance kSignTol). Reports the first violation.
AssumptionReport check_assumption1(const ImitationMechanism& mech,
                                   const PopulationGame& game, int n_samples,
                                   std::uint64_t seed);

/// Sampled check of assumption 2: at states where three distinct actions
/// tie in reward, the rates toward the tied actions must be equal and
/// strictly positive. Tie states are located by sampling plus bisection
/// along simplex segments; vacuously holds for games with fewer than three
/// actions (samples_tested = 0).
AssumptionReport check_assumption2(const ImitationMechanism& mech,
                                   const PopulationGame& game, int n_samples,
                                   std::uint64_t seed);

}  // namespace imitation

#endif
