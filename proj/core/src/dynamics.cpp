#include "imitation/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace imitation {

namespace {

constexpr double kNegativeAbort = -1e-6;

// Field evaluated on a raw matrix (integrator stages may sit slightly off
// the constraint set).
Eigen::MatrixXd field_raw(const Eigen::MatrixXd& x, const PopulationGame& game,
                          const CommunityNetwork& net,
                          const ImitationMechanism& mech) {
  const Eigen::VectorXd y = x.rowwise().sum();
  const Eigen::MatrixXd f = mech.rates(y);
  (void)game;
  const Eigen::MatrixXd Z = x * net.W().transpose();  // Z_ih = sum_k x_ik W_hk
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index h = 0; h < x.cols(); ++h) {
    out.col(h) = Z.col(h).cwiseProduct(f.transpose() * x.col(h)) -
                 x.col(h).cwiseProduct(f * Z.col(h));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd vector_field(const SystemState& x, const PopulationGame& game,
                             const CommunityNetwork& net,
                             const ImitationMechanism& mech) {
  return field_raw(x.mat(), game, net, mech);
}

Eigen::MatrixXd lambda_matrix(const SystemState& x,
                              const CommunityNetwork& net) {
  return x.mat() * net.W() * x.mat().transpose();
}

Eigen::VectorXd population_derivative(const SystemState& x,
                                      const PopulationGame& game,
                                      const CommunityNetwork& net,
                                      const ImitationMechanism& mech) {
  (void)game;
  const Eigen::VectorXd y = x.mat().rowwise().sum();
  const Eigen::MatrixXd f = mech.rates(y);
  const Eigen::MatrixXd lam = lambda_matrix(x, net);
  const Eigen::MatrixXd m = lam.cwiseProduct(f);
  return m.colwise().sum().transpose() - m.rowwise().sum();
}

double potential_derivative(const SystemState& x, const PopulationGame& game,
                            const CommunityNetwork& net,
                            const ImitationMechanism& mech) {
  if (!game.potential) {
    throw std::invalid_argument(
        "potential_derivative: game declares no potential");
  }
  if (!is_undirected(net)) {
    throw std::invalid_argument(
        "potential_derivative: undirected network required");
  }
  const Eigen::VectorXd y = x.mat().rowwise().sum();
  const Eigen::VectorXd r = game.rewards(y);
  const Eigen::MatrixXd f = mech.rates(y);
  const Eigen::MatrixXd lam = lambda_matrix(x, net);
  const int n = static_cast<int>(y.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      total += lam(i, j) * (f(j, i) - f(i, j)) * (r[i] - r[j]);
    }
  }
  return 0.5 * total;
}

void IntegratorSettings::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("integrator: step > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("integrator: t_end > 0");
  if (record_every < 1) {
    throw std::invalid_argument("integrator: record_every >= 1");
  }
  if (!(renorm_threshold > 0.0)) {
    throw std::invalid_argument("integrator: renorm_threshold > 0");
  }
  if (!(clamp_floor > 0.0)) {
    throw std::invalid_argument("integrator: clamp_floor > 0");
  }
}

Trajectory integrate(const SystemState& x0, const PopulationGame& game,
                     const CommunityNetwork& net,
                     const ImitationMechanism& mech,
                     const IntegratorSettings& settings) {
  settings.validate();
  const bool has_phi = game.potential.has_value();
  const bool has_dphi = has_phi && is_undirected(net);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Trajectory traj;
  double drift_since_record = 0.0;

  auto record = [&](double t, const Eigen::MatrixXd& x) {
    SystemState state(x, net);
    const Eigen::VectorXd y = state.mat().rowwise().sum();
    traj.times.push_back(t);
    traj.population.push_back(y);
    traj.phi.push_back(has_phi ? (*game.potential)(y) : nan);
    traj.dphi_dt.push_back(
        has_dphi ? potential_derivative(state, game, net, mech) : nan);
    traj.field_inf_norm.push_back(
        vector_field(state, game, net, mech).cwiseAbs().maxCoeff());
    traj.column_drift.push_back(drift_since_record);
    traj.states.push_back(std::move(state));
    drift_since_record = 0.0;
  };

  auto stage = [&](const Eigen::MatrixXd& x, double t) {
    Eigen::MatrixXd k = field_raw(x, game, net, mech);
    if (!k.allFinite()) {
      std::ostringstream msg;
      msg << "integrate: non-finite field at t=" << t;
      throw IntegrationError(msg.str());
    }
    return k;
  };

  Eigen::MatrixXd x = x0.mat();
  record(0.0, x);

  const double h_full = settings.step;
  const long full_steps = static_cast<long>(settings.t_end / h_full);
  const double remainder = settings.t_end - full_steps * h_full;
  const bool has_tail = remainder > 1e-12 * settings.t_end;
  const long total_steps = full_steps + (has_tail ? 1 : 0);

  for (long k = 0; k < total_steps; ++k) {
    const bool tail = k == full_steps;
    const double t = k * h_full;
    const double h = tail ? remainder : h_full;

    const Eigen::MatrixXd k1 = stage(x, t);
    const Eigen::MatrixXd k2 = stage(x + 0.5 * h * k1, t + 0.5 * h);
    const Eigen::MatrixXd k3 = stage(x + 0.5 * h * k2, t + 0.5 * h);
    const Eigen::MatrixXd k4 = stage(x + h * k3, t + h);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = tail ? settings.t_end : (k + 1) * h_full;

    const double min_entry = x.minCoeff();
    if (min_entry < kNegativeAbort) {
      std::ostringstream msg;
      msg << "integrate: entry " << min_entry << " below " << kNegativeAbort
          << " at t=" << t_next << "; field bug or step too large";
      throw IntegrationError(msg.str());
    }
    if (min_entry < 0.0) {
      // Rounding dust; the exact flow never crosses zero, so negatives in
      // the quiet band (or in rows that started at zero) are snapped back.
      const double band = settings.clamp_floor * std::max(1.0, x.maxCoeff());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index hcol = 0; hcol < x.cols(); ++hcol) {
          const double e = x(i, hcol);
          if (e < 0.0 && (e >= -band || x0.mat()(i, hcol) == 0.0 ||
                          -e < settings.clamp_floor)) {
            x(i, hcol) = 0.0;
          }
        }
      }
    }

    for (Eigen::Index hcol = 0; hcol < x.cols(); ++hcol) {
      const double want = net.eta()[hcol];
      const double got = x.col(hcol).sum();
      const double drift = std::abs(got - want);
      drift_since_record = std::max(drift_since_record, drift);
      if (drift > settings.renorm_threshold && got > 0.0) {
        x.col(hcol) *= want / got;  // scaling keeps zero entries zero
      }
    }

    if ((k + 1) % settings.record_every == 0 || k + 1 == total_steps) {
      record(t_next, x);
    }
  }
  return traj;
}

}  // namespace imitation
