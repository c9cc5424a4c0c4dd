#include "imitation/games.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "imitation/rng.hpp"

namespace imitation {

PopulationGame make_affine_game(ActionSet actions, AffineReward r,
                                std::optional<QuadraticPotential> phi,
                                std::string name) {
  const int n = actions.size();
  if (r.A.rows() != n || r.A.cols() != n || r.b.size() != n) {
    throw std::invalid_argument("make_affine_game: reward dimensions");
  }
  if (phi && (phi->P.rows() != n || phi->P.cols() != n || phi->q.size() != n)) {
    throw std::invalid_argument("make_affine_game: potential dimensions");
  }
  PopulationGame g{std::move(actions),
                   [A = r.A, b = r.b](const Eigen::VectorXd& y) {
                     return Eigen::VectorXd(b + A * y);
                   },
                   std::nullopt,
                   std::move(r),
                   std::move(phi),
                   std::move(name)};
  if (g.quadratic) {
    g.potential = [P = g.quadratic->P, q = g.quadratic->q](
                      const Eigen::VectorXd& y) {
      return y.dot(P * y) + q.dot(y);
    };
  }
  return g;
}

PopulationGame constant_reward_game() {
  AffineReward r{Eigen::MatrixXd::Zero(2, 2), Eigen::Vector2d(0.0, 1.0)};
  QuadraticPotential phi{Eigen::MatrixXd::Zero(2, 2),
                         Eigen::Vector2d(0.0, 1.0)};
  return make_affine_game(ActionSet({"0", "1"}), std::move(r), std::move(phi),
                          "constant_reward");
}

PopulationGame anticoordination_game() {
  Eigen::MatrixXd A(2, 2);
  A << 0.0, 1.0,  //
      0.0, -1.0;
  AffineReward r{A, Eigen::Vector2d(0.0, 1.0)};
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2, 2);
  P(1, 1) = -1.0;
  QuadraticPotential phi{P, Eigen::Vector2d(0.0, 1.0)};
  return make_affine_game(ActionSet({"0", "1"}), std::move(r), std::move(phi),
                          "anticoordination");
}

PopulationGame congestion_game() {
  Eigen::Vector3d load(-2.0, -4.0, -6.0);
  AffineReward r{load.asDiagonal().toDenseMatrix(), Eigen::Vector3d::Zero()};
  QuadraticPotential phi{
      Eigen::Vector3d(-1.0, -2.0, -3.0).asDiagonal().toDenseMatrix(),
      Eigen::Vector3d::Zero()};
  return make_affine_game(ActionSet({"0", "1", "2"}), std::move(r),
                          std::move(phi), "congestion");
}

PopulationGame rps_game() {
  Eigen::MatrixXd A(3, 3);
  A << 0.0, 1.0, -1.0,  //
      -1.0, 0.0, 1.0,   //
      1.0, -1.0, 0.0;
  AffineReward r{A, Eigen::Vector3d::Zero()};
  return make_affine_game(ActionSet({"0", "1", "2"}), std::move(r),
                          std::nullopt, "rps");
}

PotentialCheck check_potential(const PopulationGame& game, int n_samples,
                               std::uint64_t seed, double h_fd) {
  if (!game.potential) {
    throw std::invalid_argument("check_potential: game declares no potential");
  }
  if (!(h_fd > 0.0)) {
    throw std::invalid_argument("check_potential: h_fd must be positive");
  }
  const int n = game.n_actions();
  const auto& phi = *game.potential;
  Rng rng(seed);
  PotentialCheck out;
  out.ok = true;

  for (int s = 0; s < n_samples; ++s) {
    // interior samples far enough from the boundary that both probe points
    // stay inside the simplex
    Eigen::VectorXd y;
    int attempts = 0;
    do {
      y = rng.simplex(n);
      if (++attempts > 10000) {
        throw std::runtime_error("check_potential: interior sampling failed");
      }
    } while (y.minCoeff() <= 2.0 * h_fd);

    const Eigen::VectorXd r = game.rewards(y);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        d[j] = 1.0;
        d[i] = -1.0;
        const double fd =
            (phi(y + h_fd * d) - phi(y - h_fd * d)) / (2.0 * h_fd);
        const double err = std::abs((r[j] - r[i]) - fd);
        if (err > out.max_error) {
          out.max_error = err;
          out.worst_y = y;
          out.worst_i = i;
          out.worst_j = j;
        }
      }
    }
  }
  out.ok = out.max_error <= 1e-5;
  return out;
}

}  // namespace imitation
