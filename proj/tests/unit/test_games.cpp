#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "imitation/games.hpp"
#include "imitation/rng.hpp"

using namespace imitation;

TEST_SUITE_BEGIN("games");

TEST_CASE("constant reward game") {
  const auto game = constant_reward_game();
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd r = game.rewards(rng.simplex(2));
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 1.0);
  }
  const auto pc = check_potential(game, 100, 42);
  CHECK(pc.ok);
  CHECK(pc.max_error <= 1e-9);  // affine potential: differences are exact
}

TEST_CASE("anticoordination game") {
  const auto game = anticoordination_game();
  const Eigen::VectorXd r_mid = game.rewards(Eigen::Vector2d(0.5, 0.5));
  CHECK(r_mid[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r_mid[1] == doctest::Approx(0.5).epsilon(1e-15));
  const Eigen::VectorXd r_pure = game.rewards(Eigen::Vector2d(1.0, 0.0));
  CHECK(r_pure[0] == 0.0);
  CHECK(r_pure[1] == 1.0);
  const auto pc = check_potential(game, 200, 42);
  CHECK(pc.ok);
  CHECK(pc.max_error <= 1e-6);
}

TEST_CASE("congestion game values") {
  const auto game = congestion_game();
  const Eigen::Vector3d nash(6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0);
  const Eigen::VectorXd r = game.rewards(nash);
  for (int i = 0; i < 3; ++i) {
    CHECK(r[i] == doctest::Approx(-12.0 / 11.0).epsilon(1e-14));
  }
  const Eigen::Vector3d uniform(1.0 / 3, 1.0 / 3, 1.0 / 3);
  CHECK((*game.potential)(uniform) ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
  const auto pc = check_potential(game, 200, 42);
  CHECK(pc.ok);
  CHECK(pc.max_error <= 1e-7);  // quadratic: central differences exact
}

TEST_CASE("rock-paper-scissors has no potential") {
  const auto game = rps_game();
  CHECK_FALSE(game.potential.has_value());
  const Eigen::VectorXd r_center =
      game.rewards(Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3));
  CHECK(r_center.lpNorm<Eigen::Infinity>() <= 1e-16);
  const Eigen::VectorXd r_pure = game.rewards(Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(r_pure[0] == 0.0);
  CHECK(r_pure[1] == -1.0);
  CHECK(r_pure[2] == 1.0);

  // any candidate potential fails the consistency check
  auto candidate = game;
  candidate.potential = [](const Eigen::VectorXd& y) {
    return y.squaredNorm();
  };
  CHECK_FALSE(check_potential(candidate, 200, 42).ok);
  candidate.potential = [](const Eigen::VectorXd&) { return 0.0; };
  CHECK_FALSE(check_potential(candidate, 200, 42).ok);
}

TEST_CASE("corrupted potential is caught") {
  auto game = congestion_game();
  game.potential = [](const Eigen::VectorXd& y) {
    return -y[0] * y[0] - 2.0 * y[1] * y[1] - 3.0 * y[2] * y[2] +
           0.1 * y[0] * y[1];
  };
  const auto pc = check_potential(game, 200, 42);
  CHECK_FALSE(pc.ok);
  CHECK(pc.max_error > 1e-3);
}

TEST_CASE("check_potential requires a declared potential") {
  CHECK_THROWS_AS(check_potential(rps_game(), 10, 1), std::invalid_argument);
}

TEST_CASE("claimed equilibria are stationary points of the potential") {
  struct Case {
    PopulationGame game;
    Eigen::VectorXd equilibrium;
  };
  std::vector<Case> cases;
  cases.push_back({constant_reward_game(), Eigen::Vector2d(0.0, 1.0)});
  cases.push_back({anticoordination_game(), Eigen::Vector2d(0.5, 0.5)});
  cases.push_back(
      {congestion_game(), Eigen::Vector3d(6.0 / 11, 3.0 / 11, 2.0 / 11)});
  for (const auto& c : cases) {
    const Eigen::VectorXd r = c.game.rewards(c.equilibrium);
    const auto sup = support_of(c.equilibrium);
    for (std::size_t a = 0; a < sup.size(); ++a) {
      for (std::size_t b = a + 1; b < sup.size(); ++b) {
        CHECK(std::abs(r[sup[a]] - r[sup[b]]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("rewards stay bounded over the simplex") {
  Rng rng(5);
  for (const auto& game : {constant_reward_game(), anticoordination_game(),
                           congestion_game(), rps_game()}) {
    double max_abs = 0.0;
    for (int i = 0; i < 500; ++i) {
      max_abs = std::max(
          max_abs,
          game.rewards(rng.simplex(game.n_actions())).lpNorm<Eigen::Infinity>());
    }
    CHECK(std::isfinite(max_abs));
    CHECK(max_abs <= 10.0);
  }
}

TEST_SUITE_END();
