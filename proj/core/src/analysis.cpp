#include "imitation/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "imitation/mechanisms.hpp"
#include "imitation/rng.hpp"

namespace imitation {

namespace {

double distance_at(const Trajectory& traj, std::size_t k,
                   const ConvergenceTarget& target) {
  if (const auto* pt = std::get_if<PointTarget>(&target)) {
    return (traj.population[k] - pt->y).lpNorm<Eigen::Infinity>();
  }
  if (const auto* xt = std::get_if<XTarget>(&target)) {
    return (traj.states[k].mat() - xt->x).cwiseAbs().maxCoeff();
  }
  return std::get<SetTarget>(target).set.distance(traj.population[k]);
}

std::string describe(const ConvergenceTarget& target) {
  if (const auto* pt = std::get_if<PointTarget>(&target)) return pt->description;
  if (const auto* xt = std::get_if<XTarget>(&target)) return xt->description;
  return std::get<SetTarget>(target).description;
}

}  // namespace

ConvergenceReport convergence_report(const Trajectory& traj,
                                     const ConvergenceTarget& target,
                                     double threshold, double window) {
  if (traj.size() == 0) {
    throw std::invalid_argument("convergence_report: empty trajectory");
  }
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("convergence_report: threshold > 0");
  }
  const double t_end = traj.times.back();
  if (!(window > 0.0) || window > t_end) {
    throw std::invalid_argument("convergence_report: window in (0, t_end]");
  }

  const std::size_t count = traj.size();
  std::vector<double> dist(count);
  for (std::size_t k = 0; k < count; ++k) dist[k] = distance_at(traj, k, target);

  ConvergenceReport rep;
  rep.target = describe(target);
  rep.threshold = threshold;
  rep.window = window;
  rep.final_distance = dist.back();

  const double window_start = t_end - window;
  bool converged = true;
  for (std::size_t k = 0; k < count; ++k) {
    if (traj.times[k] >= window_start - 1e-12 && dist[k] > threshold) {
      converged = false;
      break;
    }
  }
  rep.converged = converged;

  if (converged) {
    // earliest time from which the distance never exceeds the threshold
    std::size_t start = count;
    while (start > 0 && dist[start - 1] <= threshold) --start;
    rep.time_of_convergence = traj.times[start == count ? count - 1 : start];
  }

  double min_tail = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    if (traj.times[k] >= 0.5 * t_end) min_tail = std::min(min_tail, dist[k]);
  }
  rep.min_distance_tail = min_tail;

  if (!converged) {
    // Peak-to-trough amplitude is taken over the population-state
    // components: the distance to a central target is nearly constant on a
    // cycling orbit, while the components swing with the full orbit size.
    const Eigen::Index n = traj.population[0].size();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(
        n, std::numeric_limits<double>::infinity());
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(
        n, -std::numeric_limits<double>::infinity());
    int sign_changes = 0;
    int prev_sign = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t k = 0; k < count; ++k) {
      if (traj.times[k] < window_start - 1e-12) continue;
      lo = lo.cwiseMin(traj.population[k]);
      hi = hi.cwiseMax(traj.population[k]);
      if (have_prev) {
        const double diff = dist[k] - prev;
        const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        if (sign != 0) {
          if (prev_sign != 0 && sign != prev_sign) ++sign_changes;
          prev_sign = sign;
        }
      }
      prev = dist[k];
      have_prev = true;
    }
    const double amplitude = (hi - lo).maxCoeff();
    rep.oscillation_detected =
        amplitude > 5.0 * threshold && sign_changes >= 2;
  }
  return rep;
}

std::vector<double> balancedness_deviation(const Trajectory& traj,
                                           const CommunityNetwork& net) {
  std::vector<double> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Eigen::MatrixXd target =
        traj.population[k] * net.eta().transpose();
    out[k] = (traj.states[k].mat() - target).cwiseAbs().maxCoeff();
  }
  return out;
}

bool boundary_repulsion_check(const PopulationGame& game,
                              const CommunityNetwork& net,
                              const ImitationMechanism& mech,
                              const SystemState& x_bullet, double eps_probe,
                              int n_probes, std::uint64_t seed) {
  if (!(eps_probe > 0.0) || n_probes < 1) {
    throw std::invalid_argument("boundary_repulsion_check: bad probe params");
  }
  if (!is_undirected(net) || !is_connected(net)) {
    throw std::invalid_argument(
        "boundary_repulsion_check: undirected connected network required");
  }
  if (!mech.claims_assumption1) {
    throw std::invalid_argument(
        "boundary_repulsion_check: sign-consistent mechanism required");
  }
  const Eigen::VectorXd y = x_bullet.mat().rowwise().sum();
  const Eigen::VectorXd r = game.rewards(y);
  const std::vector<int> sup = support_of(y);

  double sup_reward = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < sup.size(); ++a) {
    for (std::size_t b = a + 1; b < sup.size(); ++b) {
      if (std::abs(r[sup[a]] - r[sup[b]]) > 1e-9) {
        throw std::invalid_argument(
            "boundary_repulsion_check: state is not a restricted equilibrium");
      }
    }
    sup_reward = std::max(sup_reward, r[sup[a]]);
  }

  // the unplayed action that strictly beats every played one
  int better = -1;
  for (int i = 0; i < game.n_actions(); ++i) {
    if (y[i] == 0.0 && r[i] > sup_reward + 1e-9) {
      if (better < 0 || r[i] > r[better]) better = i;
    }
  }
  if (better < 0) {
    throw std::invalid_argument(
        "boundary_repulsion_check: state is a full equilibrium; no "
        "superior unplayed action exists");
  }

  Rng rng(seed);
  const int m = net.size();
  for (int p = 0; p < n_probes; ++p) {
    Eigen::MatrixXd x = x_bullet.mat();
    for (int h = 0; h < m; ++h) {
      int donor = 0;
      x_bullet.mat().col(h).maxCoeff(&donor);
      const double amount =
          std::min(eps_probe * rng.uniform(0.25, 0.75),
                   0.5 * x_bullet.mat()(donor, h));
      x(better, h) += amount;
      x(donor, h) -= amount;
    }
    const Eigen::VectorXd ydot =
        population_derivative(SystemState(x, net), game, net, mech);
    if (!(ydot[better] > 0.0)) return false;
  }
  return true;
}

AuditReport invariant_audit(const Trajectory& traj, const PopulationGame& game,
                            const CommunityNetwork& net,
                            const ImitationMechanism& mech) {
  if (traj.size() == 0) {
    throw std::invalid_argument("invariant_audit: empty trajectory");
  }
  AuditReport rep;

  rep.column_conservation.applicable = true;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.column_drift[k] > 1e-8) {
      rep.column_conservation.pass = false;
      rep.column_conservation.first_violation = static_cast<long>(k);
      break;
    }
  }

  rep.support_constant.applicable = true;
  const std::vector<int> sup0 = support_of(traj.population[0]);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    if (support_of(traj.population[k]) != sup0) {
      rep.support_constant.pass = false;
      rep.support_constant.first_violation = static_cast<long>(k);
      break;
    }
  }

  const bool potential_applies = game.potential.has_value() &&
                                 is_undirected(net) && is_connected(net) &&
                                 mech.claims_assumption1;
  rep.potential_monotone.applicable = potential_applies;
  if (potential_applies) {
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const bool drop =
          k + 1 < traj.size() && traj.phi[k + 1] < traj.phi[k] - 1e-8;
      const bool negative_rate =
          std::isfinite(traj.dphi_dt[k]) && traj.dphi_dt[k] < -1e-10;
      if (drop || negative_rate) {
        rep.potential_monotone.pass = false;
        rep.potential_monotone.first_violation = static_cast<long>(k);
        break;
      }
    }
  }

  rep.simplex_containment.applicable = true;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& y = traj.population[k];
    if (y.minCoeff() < -1e-10 || std::abs(y.sum() - 1.0) > 1e-10) {
      rep.simplex_containment.pass = false;
      rep.simplex_containment.first_violation = static_cast<long>(k);
      break;
    }
  }
  return rep;
}

}  // namespace imitation
