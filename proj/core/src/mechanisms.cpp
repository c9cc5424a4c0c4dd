#include "imitation/mechanisms.hpp"

#include <cmath>
#include <stdexcept>

#include "imitation/rng.hpp"

namespace imitation {

namespace {

constexpr std::uint64_t kValidationSeed = 0x1571ec0de;

int sgn_tol(double v) {
  if (v > kSignTol) return 1;
  if (v < -kSignTol) return -1;
  return 0;
}

double max_abs_reward_sampled(const PopulationGame& game, int n_samples) {
  Rng rng(kValidationSeed);
  double m = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    m = std::max(m, game.rewards(rng.simplex(game.n_actions())).lpNorm<Eigen::Infinity>());
  }
  return m;
}

}  // namespace

ImitationMechanism replicator_mechanism(const PopulationGame& game, double c) {
  const int n = game.n_actions();
  Rng rng(kValidationSeed);
  for (int s = 0; s < 1000; ++s) {
    const Eigen::VectorXd r = game.rewards(rng.simplex(n));
    if ((r.array() + c).minCoeff() < 0.0) {
      throw std::invalid_argument(
          "replicator_mechanism: c + r_j sampled negative; choose a larger c");
    }
  }
  ImitationMechanism m;
  m.rates = [reward = game.reward, c, n](const Eigen::VectorXd& y) {
    const Eigen::VectorXd r = reward(y);
    Eigen::MatrixXd f(n, n);
    for (int i = 0; i < n; ++i) f.row(i) = (r.array() + c).transpose();
    return f;
  };
  m.claims_assumption1 = true;
  m.claims_assumption2 = true;
  m.tie_behavior = TieBehavior::positive_everywhere;
  m.name = "replicator";
  return m;
}

ImitationMechanism replicator_mechanism(const PopulationGame& game) {
  return replicator_mechanism(game, 1.0 + max_abs_reward_sampled(game, 1000));
}

ImitationMechanism pairwise_proportional_mechanism(
    const PopulationGame& game) {
  const int n = game.n_actions();
  ImitationMechanism m;
  m.rates = [reward = game.reward, n](const Eigen::VectorXd& y) {
    const Eigen::VectorXd r = reward(y);
    Eigen::MatrixXd f(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        f(i, j) = std::max(r[j] - r[i], 0.0);
      }
    }
    return f;
  };
  m.claims_assumption1 = true;
  m.claims_assumption2 = false;
  m.tie_behavior = TieBehavior::zero_at_equal_rewards;
  m.name = "pairwise_proportional";
  return m;
}

ImitationMechanism sigmoid_mechanism(const PopulationGame& game,
                                     const Eigen::MatrixXd& K) {
  const int n = game.n_actions();
  if (K.rows() != n || K.cols() != n) {
    throw std::invalid_argument("sigmoid_mechanism: K must be n x n");
  }
  if (K.minCoeff() <= 0.0) {
    throw std::invalid_argument("sigmoid_mechanism: K entries must be > 0");
  }
  ImitationMechanism m;
  m.rates = [reward = game.reward, K, n](const Eigen::VectorXd& y) {
    const Eigen::VectorXd r = reward(y);
    Eigen::MatrixXd f(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        f(i, j) = 1.0 / (1.0 + std::exp(-K(i, j) * (r[j] - r[i])));
      }
    }
    return f;
  };
  m.claims_assumption1 = true;
  m.claims_assumption2 = true;
  m.tie_behavior = TieBehavior::positive_everywhere;
  m.name = "sigmoid";
  return m;
}

ImitationMechanism sigmoid_mechanism(const PopulationGame& game, double k) {
  const int n = game.n_actions();
  return sigmoid_mechanism(game, Eigen::MatrixXd::Constant(n, n, k));
}

AssumptionReport check_assumption1(const ImitationMechanism& mech,
                                   const PopulationGame& game, int n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 1) {
    throw std::invalid_argument("check_assumption1: n_samples >= 1 required");
  }
  const int n = game.n_actions();
  Rng rng(seed);
  AssumptionReport rep;
  rep.assumption_id = 1;
  for (int s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd y = rng.simplex(n);
    const Eigen::VectorXd r = game.rewards(y);
    const Eigen::MatrixXd f = mech.rates(y);
    rep.samples_tested = s + 1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (sgn_tol(f(i, j) - f(j, i)) != sgn_tol(r[j] - r[i])) {
          rep.holds_on_samples = false;
          rep.counterexample = AssumptionWitness{
              y, {i, j}, {f(i, j), f(j, i)}, {r[i], r[j]}};
          return rep;
        }
      }
    }
  }
  return rep;
}

namespace {

// Root of r_i - r_j along the segment (1-t) a + t b, by bisection. Returns
// the tie state when a sign change brackets one.
std::optional<Eigen::VectorXd> pair_tie_on_segment(const PopulationGame& game,
                                                   const Eigen::VectorXd& a,
                                                   const Eigen::VectorXd& b,
                                                   int i, int j) {
  auto gap = [&](double t) {
    const Eigen::VectorXd y = (1.0 - t) * a + t * b;
    const Eigen::VectorXd r = game.rewards(y);
    return r[i] - r[j];
  };
  double lo = 0.0, hi = 1.0;
  double glo = gap(lo), ghi = gap(hi);
  if (std::abs(glo) <= 1e-14) return Eigen::VectorXd((1.0 - lo) * a + lo * b);
  if (std::abs(ghi) <= 1e-14) return Eigen::VectorXd((1.0 - hi) * a + hi * b);
  if ((glo > 0.0) == (ghi > 0.0)) return std::nullopt;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = gap(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  return Eigen::VectorXd((1.0 - t) * a + t * b);
}

}  // namespace

AssumptionReport check_assumption2(const ImitationMechanism& mech,
                                   const PopulationGame& game, int n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 1) {
    throw std::invalid_argument("check_assumption2: n_samples >= 1 required");
  }
  const int n = game.n_actions();
  AssumptionReport rep;
  rep.assumption_id = 2;
  if (n < 3) return rep;  // no triples exist; vacuously holds

  Rng rng(seed);
  std::vector<Eigen::VectorXd> ties;

  auto is_triple_tie = [&](const Eigen::VectorXd& y, int i, int j, int l) {
    const Eigen::VectorXd r = game.rewards(y);
    return std::abs(r[i] - r[j]) <= kSignTol &&
           std::abs(r[i] - r[l]) <= kSignTol &&
           std::abs(r[j] - r[l]) <= kSignTol;
  };
  auto record_tie = [&](const Eigen::VectorXd& y) {
    for (const auto& seen : ties) {
      if ((seen - y).lpNorm<Eigen::Infinity>() < 1e-7) return;
    }
    ties.push_back(y);
  };

  // direct sampling occasionally hits exact-tie manifolds (constant games)
  for (int s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd y = rng.simplex(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = j + 1; l < n; ++l)
          if (is_triple_tie(y, i, j, l)) record_tie(y);
  }

  // Bisection search: within a family of simplex segments parametrized by s,
  // trace the pair-tie point of (i, j) and bisect r_j - r_l along the trace.
  const int attempts = std::max(8, n_samples / 250);
  for (int a = 0; a < attempts; ++a) {
    const Eigen::VectorXd a0 = rng.simplex(n), a1 = rng.simplex(n);
    const Eigen::VectorXd b0 = rng.simplex(n), b1 = rng.simplex(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int l = j + 1; l < n; ++l) {
          auto trace = [&](double s) -> std::optional<Eigen::VectorXd> {
            const Eigen::VectorXd as = (1.0 - s) * a0 + s * a1;
            const Eigen::VectorXd bs = (1.0 - s) * b0 + s * b1;
            return pair_tie_on_segment(game, as, bs, i, j);
          };
          const int grid = 16;
          double prev_s = -1.0, prev_gap = 0.0;
          for (int g = 0; g <= grid; ++g) {
            const double s = static_cast<double>(g) / grid;
            const auto p = trace(s);
            if (!p) {
              prev_s = -1.0;
              continue;
            }
            const Eigen::VectorXd r = game.rewards(*p);
            const double gap = r[j] - r[l];
            if (std::abs(gap) <= kSignTol && is_triple_tie(*p, i, j, l)) {
              record_tie(*p);
            } else if (prev_s >= 0.0 && (gap > 0.0) != (prev_gap > 0.0)) {
              double lo = prev_s, hi = s, glo = prev_gap;
              for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const auto pm = trace(mid);
                if (!pm) break;
                const Eigen::VectorXd rm = game.rewards(*pm);
                const double gm = rm[j] - rm[l];
                if ((gm > 0.0) == (glo > 0.0)) {
                  lo = mid;
                  glo = gm;
                } else {
                  hi = mid;
                }
              }
              const auto pt = trace(0.5 * (lo + hi));
              if (pt && is_triple_tie(*pt, i, j, l)) record_tie(*pt);
            }
            prev_s = s;
            prev_gap = gap;
          }
        }
      }
    }
  }

  // at each tie state, rates toward the tied actions must be equal and
  // strictly positive
  for (const auto& y : ties) {
    const Eigen::VectorXd r = game.rewards(y);
    const Eigen::MatrixXd f = mech.rates(y);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          if (i == j || i == l || j >= l) continue;
          if (std::abs(r[i] - r[j]) > kSignTol ||
              std::abs(r[i] - r[l]) > kSignTol)
            continue;
          const bool equal = std::abs(f(i, j) - f(i, l)) <= kSignTol;
          const bool positive = f(i, j) > kSignTol;
          if (!equal || !positive) {
            rep.holds_on_samples = false;
            rep.counterexample = AssumptionWitness{
                y, {i, j, l}, {f(i, j), f(i, l)}, {r[i], r[j], r[l]}};
            rep.samples_tested = static_cast<long>(ties.size());
            return rep;
          }
        }
      }
    }
  }
  rep.samples_tested = static_cast<long>(ties.size());
  return rep;
}

}  // namespace imitation
