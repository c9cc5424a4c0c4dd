#include "imitation/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "imitation/mechanisms.hpp"
#include "imitation/rng.hpp"
#include "parallel.hpp"

namespace imitation {

namespace {

constexpr double kRewardTieTol = 1e-9;
constexpr double kClampTol = 1e-12;

Eigen::VectorXd embed(const Eigen::VectorXd& ys, const std::vector<int>& sup,
                      int n) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (std::size_t c = 0; c < sup.size(); ++c) y[sup[c]] = ys[c];
  return y;
}

Eigen::VectorXd clamp_dust(Eigen::VectorXd y) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) y[i] = 0.0;
  }
  return y;
}

// Euclidean projection of v onto {p >= 0, sum p = mass}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v, double mass) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, tau = 0.0;
  for (int i = 0; i < n; ++i) {
    cumsum += u[i];
    const double t = (cumsum - mass) / (i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0);
}

double segment_distance(const Eigen::VectorXd& y, const Eigen::VectorXd& a,
                        const Eigen::VectorXd& b) {
  const Eigen::VectorXd d = b - a;
  auto f = [&](double t) {
    return (y - a - t * d).lpNorm<Eigen::Infinity>();
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

double RestrictedNashComponent::distance(const Eigen::VectorXd& y) const {
  if (is_point()) return (y - base).lpNorm<Eigen::Infinity>();
  if (directions.cols() == 1 && points.size() == 2) {
    return segment_distance(y, points[0], points[1]);
  }
  // best-effort for higher-dimensional pieces: start from the orthogonal
  // projection onto the affine hull, polish the infinity norm by coordinate
  // search, then fall back to the stored representatives
  const int d = static_cast<int>(directions.cols());
  Eigen::VectorXd t = directions.transpose() * (y - base);
  auto value = [&](const Eigen::VectorXd& tt) {
    return (y - base - directions * tt).lpNorm<Eigen::Infinity>();
  };
  for (int sweep = 0; sweep < 40; ++sweep) {
    for (int c = 0; c < d; ++c) {
      double lo = t[c] - 2.0, hi = t[c] + 2.0;
      for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        Eigen::VectorXd t1 = t, t2 = t;
        t1[c] = m1;
        t2[c] = m2;
        if (value(t1) <= value(t2)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      t[c] = 0.5 * (lo + hi);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd candidate = base + directions * t;
  if (candidate.minCoeff() >= -1e-9) {
    best = (y - candidate).lpNorm<Eigen::Infinity>();
  }
  for (const auto& p : points) {
    best = std::min(best, (y - p).lpNorm<Eigen::Infinity>());
  }
  return best;
}

namespace {

// Exact enumeration on one support of an affine game. Returns nothing when
// the tie system is inconsistent or the solution set misses the simplex.
std::optional<RestrictedNashComponent> solve_support_affine(
    const AffineReward& ar, const std::vector<int>& sup, int n) {
  const int k = static_cast<int>(sup.size());
  Eigen::MatrixXd M(k, k);
  Eigen::VectorXd rhs(k);
  for (int m = 0; m + 1 < k; ++m) {
    for (int c = 0; c < k; ++c) {
      M(m, c) = ar.A(sup[0], sup[c]) - ar.A(sup[m + 1], sup[c]);
    }
    rhs[m] = ar.b[sup[m + 1]] - ar.b[sup[0]];
  }
  M.row(k - 1).setOnes();
  rhs[k - 1] = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-10);
  const Eigen::VectorXd sol = lu.solve(rhs);
  if ((M * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-9) {
    return std::nullopt;  // inconsistent tie system: no equilibrium here
  }
  const int d = static_cast<int>(lu.dimensionOfKernel());

  RestrictedNashComponent comp;
  comp.support = sup;

  if (d == 0) {
    if (sol.minCoeff() < -kClampTol) return std::nullopt;
    comp.base = clamp_dust(embed(sol, sup, n));
    comp.directions = Eigen::MatrixXd::Zero(n, 0);
    comp.points = {comp.base};
    return comp;
  }

  Eigen::MatrixXd kernel = lu.kernel();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
  Eigen::MatrixXd v =
      qr.householderQ() * Eigen::MatrixXd::Identity(k, d);

  if (d == 1) {
    // segment: clip the line sol + t v to the nonnegativity constraints
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double vc = v(c, 0);
      if (vc > 1e-14) {
        t_lo = std::max(t_lo, -sol[c] / vc);
      } else if (vc < -1e-14) {
        t_hi = std::min(t_hi, -sol[c] / vc);
      } else if (sol[c] < -kClampTol) {
        return std::nullopt;
      }
    }
    if (!(t_lo <= t_hi + 1e-12) || !std::isfinite(t_lo) ||
        !std::isfinite(t_hi)) {
      return std::nullopt;
    }
    const Eigen::VectorXd a = clamp_dust(embed(sol + t_lo * v.col(0), sup, n));
    const Eigen::VectorXd b = clamp_dust(embed(sol + t_hi * v.col(0), sup, n));
    comp.base = 0.5 * (a + b);
    comp.directions = Eigen::MatrixXd::Zero(n, 1);
    for (int c = 0; c < k; ++c) comp.directions(sup[c], 0) = v(c, 0);
    comp.points = {a, b};
    return comp;
  }

  // d >= 2: alternating projections to locate a feasible point and project
  // the face vertices into the set as representatives
  auto project_affine = [&](Eigen::VectorXd ys) {
    return Eigen::VectorXd(sol + v * (v.transpose() * (ys - sol)));
  };
  auto settle = [&](Eigen::VectorXd ys) -> std::optional<Eigen::VectorXd> {
    for (int it = 0; it < 500; ++it) {
      ys = project_affine(project_simplex(ys, 1.0));
    }
    if (ys.minCoeff() < -1e-9) return std::nullopt;
    if ((M * ys - rhs).lpNorm<Eigen::Infinity>() > 1e-8) return std::nullopt;
    return clamp_dust(ys);
  };
  const auto base = settle(sol);
  if (!base) return std::nullopt;
  comp.base = embed(*base, sup, n);
  comp.directions = Eigen::MatrixXd::Zero(n, d);
  for (int c = 0; c < k; ++c) comp.directions.row(sup[c]) = v.row(c);
  comp.points = {comp.base};
  for (int c = 0; c < k; ++c) {
    const auto vert = settle(Eigen::VectorXd::Unit(k, c));
    if (!vert) continue;
    const Eigen::VectorXd full = embed(*vert, sup, n);
    bool fresh = true;
    for (const auto& p : comp.points) {
      if ((p - full).lpNorm<Eigen::Infinity>() < 1e-8) fresh = false;
    }
    if (fresh) comp.points.push_back(full);
  }
  return comp;
}

// Best-effort fallback for games without affine coefficients: multistart
// projected-gradient descent on the squared reward gaps over the face.
std::vector<RestrictedNashComponent> solve_support_numeric(
    const PopulationGame& game, const std::vector<int>& sup, int n) {
  const int k = static_cast<int>(sup.size());
  auto gaps2 = [&](const Eigen::VectorXd& ys) {
    const Eigen::VectorXd r = game.rewards(embed(ys, sup, n));
    double g = 0.0;
    for (int m = 1; m < k; ++m) {
      const double d = r[sup[0]] - r[sup[m]];
      g += d * d;
    }
    return g;
  };
  std::vector<RestrictedNashComponent> found;
  Rng rng(0xfacadeULL + static_cast<std::uint64_t>(k));
  for (int start = 0; start < 24; ++start) {
    Eigen::VectorXd ys = rng.simplex(k);
    double g = gaps2(ys);
    for (int it = 0; it < 400 && g > 1e-22; ++it) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(k);
      const double h = 1e-7;
      for (int c = 0; c < k; ++c) {
        Eigen::VectorXd hi = ys, lo = ys;
        hi[c] += h;
        lo[c] -= h;
        grad[c] = (gaps2(hi) - gaps2(lo)) / (2.0 * h);
      }
      double alpha = 1.0;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        const Eigen::VectorXd trial = project_simplex(ys - alpha * grad, 1.0);
        const double gt = gaps2(trial);
        if (gt < g) {
          ys = trial;
          g = gt;
          improved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!improved) break;
    }
    if (g <= 1e-18) {
      const Eigen::VectorXd full = clamp_dust(embed(ys, sup, n));
      bool fresh = true;
      for (const auto& c : found) {
        if ((c.base - full).lpNorm<Eigen::Infinity>() < 1e-8) fresh = false;
      }
      if (fresh) {
        RestrictedNashComponent comp;
        comp.support = sup;
        comp.base = full;
        comp.directions = Eigen::MatrixXd::Zero(n, 0);
        comp.points = {full};
        found.push_back(std::move(comp));
      }
    }
  }
  return found;
}

}  // namespace

std::vector<RestrictedNashComponent> restricted_nash_enumerate(
    const PopulationGame& game) {
  const int n = game.n_actions();
  std::vector<RestrictedNashComponent> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> sup;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) sup.push_back(i);
    }
    if (game.affine) {
      if (auto comp = solve_support_affine(*game.affine, sup, n)) {
        out.push_back(std::move(*comp));
      }
    } else {
      for (auto& comp : solve_support_numeric(game, sup, n)) {
        out.push_back(std::move(comp));
      }
    }
  }
  // a boundary solution on a larger support duplicates the smaller support's
  // point; keep the first (smaller-support) occurrence
  std::vector<RestrictedNashComponent> dedup;
  for (auto& comp : out) {
    bool duplicate = false;
    if (comp.is_point()) {
      for (const auto& kept : dedup) {
        if (kept.is_point() &&
            (kept.base - comp.base).lpNorm<Eigen::Infinity>() < 1e-10) {
          duplicate = true;
          break;
        }
      }
    }
    if (!duplicate) dedup.push_back(std::move(comp));
  }
  return dedup;
}

std::vector<Eigen::VectorXd> restricted_nash_points(
    const PopulationGame& game) {
  std::vector<Eigen::VectorXd> pts;
  for (const auto& comp : restricted_nash_enumerate(game)) {
    for (const auto& p : comp.points) {
      bool fresh = true;
      for (const auto& q : pts) {
        if ((p - q).lpNorm<Eigen::Infinity>() < 1e-10) fresh = false;
      }
      if (fresh) pts.push_back(p);
    }
  }
  return pts;
}

std::vector<Eigen::VectorXd> nash_filter(
    const PopulationGame& game,
    const std::vector<Eigen::VectorXd>& candidates) {
  std::vector<Eigen::VectorXd> kept;
  for (const auto& y : candidates) {
    const Eigen::VectorXd r = game.rewards(y);
    const std::vector<int> sup = support_of(y);
    double min_in = std::numeric_limits<double>::infinity();
    for (int i : sup) min_in = std::min(min_in, r[i]);
    double max_out = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < game.n_actions(); ++j) {
      if (y[j] == 0.0) max_out = std::max(max_out, r[j]);
    }
    if (min_in >= max_out - kRewardTieTol) kept.push_back(y);
  }
  return kept;
}

double LimitSet::distance(const Eigen::VectorXd& y) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& comp : components) {
    best = std::min(best, comp.distance(y));
  }
  return best;
}

LimitSet y_circle(const PopulationGame& game) {
  const int n = game.n_actions();
  const auto comps = restricted_nash_enumerate(game);
  std::vector<Eigen::VectorXd> reps;
  for (const auto& c : comps) {
    for (const auto& p : c.points) reps.push_back(p);
  }
  const auto nash = nash_filter(game, reps);

  // faces of the simplex that contain an equilibrium
  std::vector<bool> face_qualifies(n, false);
  for (const auto& y : nash) {
    for (int i = 0; i < n; ++i) {
      if (y[i] <= kClampTol) face_qualifies[i] = true;
    }
  }

  LimitSet out;
  for (const auto& y : nash) {
    RestrictedNashComponent comp;
    comp.support = support_of(y);
    comp.base = y;
    comp.directions = Eigen::MatrixXd::Zero(n, 0);
    comp.points = {y};
    out.components.push_back(std::move(comp));
    out.from_nash.push_back(true);
  }
  for (const auto& c : comps) {
    bool on_qualifying_face = false;
    for (int i = 0; i < n; ++i) {
      const bool in_support =
          std::find(c.support.begin(), c.support.end(), i) != c.support.end();
      if (!in_support && face_qualifies[i]) on_qualifying_face = true;
    }
    if (on_qualifying_face) {
      out.components.push_back(c);
      out.from_nash.push_back(false);
    }
  }
  return out;
}

EquilibriumRecord classify_equilibrium(const SystemState& x,
                                       const PopulationGame& game,
                                       const CommunityNetwork& net,
                                       const ImitationMechanism& mech,
                                       double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tol > 0 required");
  const Eigen::VectorXd y = x.mat().rowwise().sum();
  const Eigen::VectorXd r = game.rewards(y);
  const std::vector<int> sup = support_of(y);

  EquilibriumRecord rec{x, y, 0.0, {}, false, CharacterizationVerdict::consistent, {}};
  rec.field_norm = vector_field(x, game, net, mech).cwiseAbs().maxCoeff();
  rec.network_connected = is_connected(net);

  const bool balanced = is_balanced(x, net, tol);
  bool restricted = true;
  for (std::size_t a = 0; a < sup.size(); ++a) {
    for (std::size_t b = a + 1; b < sup.size(); ++b) {
      if (std::abs(r[sup[a]] - r[sup[b]]) > kRewardTieTol) restricted = false;
    }
  }
  double min_in = std::numeric_limits<double>::infinity();
  for (int i : sup) min_in = std::min(min_in, r[i]);
  bool nash = restricted;
  for (int j = 0; j < game.n_actions(); ++j) {
    if (y[j] == 0.0 && r[j] > min_in + kRewardTieTol) nash = false;
  }

  if (balanced) rec.classes.insert("balanced");
  if (restricted) rec.classes.insert("restricted_nash");
  if (nash) rec.classes.insert("nash");

  const bool is_eq = rec.field_norm <= tol;
  const bool predicted =
      mech.claims_assumption1 &&
      (restricted && (balanced || mech.tie_behavior ==
                                      TieBehavior::zero_at_equal_rewards));
  if (predicted) rec.classes.insert("predicted_stationary");

  if (!mech.claims_assumption1) {
    rec.consistency = CharacterizationVerdict::not_applicable;
    rec.note = "mechanism does not claim the sign-consistency assumption";
    return rec;
  }
  if (predicted && !is_eq) {
    rec.consistency = CharacterizationVerdict::violated;
    rec.note = "predicted stationary state has nonzero field";
    return rec;
  }
  if (!rec.network_connected) {
    rec.consistency = CharacterizationVerdict::not_applicable;
    rec.note = "network not strongly connected; characterization silent";
    return rec;
  }
  if (is_eq && !restricted) {
    rec.consistency = CharacterizationVerdict::violated;
    rec.note = "stationary state is not a restricted equilibrium";
    return rec;
  }
  if (is_eq && restricted && !balanced) {
    if (mech.tie_behavior == TieBehavior::positive_everywhere) {
      rec.consistency = CharacterizationVerdict::violated;
      rec.note = "positive rates admit only balanced stationary states";
      return rec;
    }
    if (mech.tie_behavior == TieBehavior::unknown) {
      rec.consistency = CharacterizationVerdict::inconclusive;
      rec.note = "mechanism fits neither characterization case";
      return rec;
    }
  }
  rec.consistency = CharacterizationVerdict::consistent;
  return rec;
}

namespace {

std::vector<std::vector<int>> integer_compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  // odometer over the first parts-1 coordinates
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == parts - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, total);
  return out;
}

// Damped Gauss-Newton descent on the squared field norm, in column-tangent
// coordinates (mass shuffles within each community), nonnegativity kept by
// projection. Actions with no mass are frozen; boundary dust left behind by
// the descent is snapped to exact zeros between rounds so classification
// sees crisp supports.
Eigen::MatrixXd refine_candidate(Eigen::MatrixXd x, const PopulationGame& game,
                                 const CommunityNetwork& net,
                                 const ImitationMechanism& mech) {
  (void)game;
  const int n = static_cast<int>(x.rows());
  const int m = static_cast<int>(x.cols());
  constexpr double kDust = 5e-8;

  auto field = [&](const Eigen::MatrixXd& xx) {
    const Eigen::VectorXd y = xx.rowwise().sum();
    const Eigen::MatrixXd f = mech.rates(y);
    const Eigen::MatrixXd z = xx * net.W().transpose();
    Eigen::MatrixXd out(n, m);
    for (int h = 0; h < m; ++h) {
      out.col(h) = z.col(h).cwiseProduct(f.transpose() * xx.col(h)) -
                   xx.col(h).cwiseProduct(f * z.col(h));
    }
    return out;
  };
  auto project_columns = [&](Eigen::MatrixXd xx) {
    for (int h = 0; h < m; ++h) {
      if (xx.col(h).minCoeff() < 0.0) {
        xx.col(h) = project_simplex(xx.col(h), net.eta()[h]);
      }
    }
    return xx;
  };

  x = project_columns(std::move(x));

  for (int round = 0; round < 3; ++round) {
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
      if (x.row(i).maxCoeff() > 0.0) active.push_back(i);
    }
    if (active.size() >= 2) {
      const int pivot = active.back();
      const int dims = static_cast<int>(active.size() - 1) * m;
      Eigen::VectorXd residual =
          Eigen::Map<const Eigen::VectorXd>(field(x).data(), n * m);
      double g2 = residual.squaredNorm();
      double lambda = 1e-3;
      const double delta = 1e-7;

      for (int iter = 0; iter < 80; ++iter) {
        if (residual.lpNorm<Eigen::Infinity>() <= 1e-14) break;
        Eigen::MatrixXd jac(n * m, dims);
        int col = 0;
        for (int h = 0; h < m; ++h) {
          for (std::size_t c = 0; c + 1 < active.size(); ++c, ++col) {
            Eigen::MatrixXd hi = x, lo = x;
            hi(active[c], h) += delta;
            hi(pivot, h) -= delta;
            lo(active[c], h) -= delta;
            lo(pivot, h) += delta;
            const Eigen::MatrixXd fh = field(hi), fl = field(lo);
            jac.col(col) =
                (Eigen::Map<const Eigen::VectorXd>(fh.data(), n * m) -
                 Eigen::Map<const Eigen::VectorXd>(fl.data(), n * m)) /
                (2.0 * delta);
          }
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * residual;
        bool accepted = false;
        for (int attempt = 0; attempt < 10; ++attempt) {
          Eigen::MatrixXd damped = jtj;
          damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
          const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
          Eigen::MatrixXd trial = x;
          int sc = 0;
          for (int h = 0; h < m; ++h) {
            for (std::size_t c = 0; c + 1 < active.size(); ++c, ++sc) {
              trial(active[c], h) += step[sc];
              trial(pivot, h) -= step[sc];
            }
          }
          trial = project_columns(std::move(trial));
          const Eigen::MatrixXd ftrial = field(trial);
          const double g2_trial =
              Eigen::Map<const Eigen::VectorXd>(ftrial.data(), n * m)
                  .squaredNorm();
          if (g2_trial < g2) {
            x = std::move(trial);
            residual = Eigen::Map<const Eigen::VectorXd>(ftrial.data(), n * m);
            g2 = g2_trial;
            lambda = std::max(lambda / 3.0, 1e-12);
            accepted = true;
            break;
          }
          lambda *= 5.0;
        }
        if (!accepted) break;
      }
    }

    bool snapped = false;
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < m; ++h) {
        if (x(i, h) > 0.0 && x(i, h) < kDust) {
          x(i, h) = 0.0;
          snapped = true;
        }
      }
    }
    if (!snapped) break;
    for (int h = 0; h < m; ++h) {
      const double got = x.col(h).sum();
      if (got > 0.0) x.col(h) *= net.eta()[h] / got;
    }
  }
  return x;
}

}  // namespace

std::vector<EquilibriumRecord> find_equilibria_numeric(
    const PopulationGame& game, const CommunityNetwork& net,
    const ImitationMechanism& mech, int grid_density) {
  if (grid_density < 1) {
    throw std::invalid_argument("find_equilibria_numeric: density >= 1");
  }
  const int n = game.n_actions();
  const int m = net.size();

  const auto comps = integer_compositions(grid_density, n);
  const std::int64_t per_column = static_cast<std::int64_t>(comps.size());
  double total_d = 1.0;
  for (int h = 0; h < m; ++h) total_d *= static_cast<double>(per_column);
  if (total_d > 1e7) {
    throw std::invalid_argument(
        "find_equilibria_numeric: grid of " + std::to_string(total_d) +
        " points exceeds the 1e7 guard; lower the density");
  }
  const std::int64_t total = static_cast<std::int64_t>(total_d);

  auto decode = [&](std::int64_t flat) {
    Eigen::MatrixXd x(n, m);
    for (int h = 0; h < m; ++h) {
      const std::int64_t idx = flat % per_column;
      flat /= per_column;
      const double scale = net.eta()[h] / grid_density;
      for (int i = 0; i < n; ++i) x(i, h) = comps[idx][i] * scale;
    }
    return x;
  };
  auto field_norm_raw = [&](const Eigen::MatrixXd& x) {
    const Eigen::VectorXd y = x.rowwise().sum();
    const Eigen::MatrixXd f = mech.rates(y);
    const Eigen::MatrixXd z = x * net.W().transpose();
    double norm = 0.0;
    for (int h = 0; h < m; ++h) {
      const Eigen::VectorXd col =
          z.col(h).cwiseProduct(f.transpose() * x.col(h)) -
          x.col(h).cwiseProduct(f * z.col(h));
      norm = std::max(norm, col.cwiseAbs().maxCoeff());
    }
    return norm;
  };

  // pass 1: scan the grid, keeping the sub-threshold points and a bounded
  // set of best scorers per chunk
  struct Scored {
    double norm;
    std::int64_t idx;
  };
  const int workers = detail::default_workers();
  std::vector<std::vector<Scored>> chunk_hits(
      static_cast<std::size_t>(workers) * 4 + 1);
  detail::parallel_chunks(total, workers, [&](int chunk, std::int64_t begin,
                                              std::int64_t end) {
    auto& local = chunk_hits[static_cast<std::size_t>(chunk)];
    std::vector<Scored> best;
    for (std::int64_t i = begin; i < end; ++i) {
      const double norm = field_norm_raw(decode(i));
      if (norm < 1e-3) {
        if (local.size() < 4096) local.push_back({norm, i});
      }
      if (best.size() < 256) {
        best.push_back({norm, i});
        if (best.size() == 256) {
          std::make_heap(best.begin(), best.end(),
                         [](const Scored& a, const Scored& b) {
                           return a.norm < b.norm;
                         });
        }
      } else if (norm < best.front().norm) {
        std::pop_heap(best.begin(), best.end(),
                      [](const Scored& a, const Scored& b) {
                        return a.norm < b.norm;
                      });
        best.back() = {norm, i};
        std::push_heap(best.begin(), best.end(),
                       [](const Scored& a, const Scored& b) {
                         return a.norm < b.norm;
                       });
      }
    }
    local.insert(local.end(), best.begin(), best.end());
  });

  std::vector<Scored> candidates;
  for (const auto& hits : chunk_hits) {
    candidates.insert(candidates.end(), hits.begin(), hits.end());
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Scored& a, const Scored& b) {
              return a.norm != b.norm ? a.norm < b.norm : a.idx < b.idx;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Scored& a, const Scored& b) {
                                 return a.idx == b.idx;
                               }),
                   candidates.end());

  // cluster in state space so each basin is refined once
  const double cluster_radius = 1.5 / grid_density;
  std::vector<Eigen::MatrixXd> reps;
  for (const auto& cand : candidates) {
    if (reps.size() >= 400) break;
    const Eigen::MatrixXd x = decode(cand.idx);
    bool fresh = true;
    for (const auto& r : reps) {
      if ((r - x).cwiseAbs().maxCoeff() <= cluster_radius) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(x);
  }

  // pass 2: refine, filter, deduplicate, classify
  std::vector<Eigen::MatrixXd> refined(reps.size());
  detail::parallel_chunks(
      static_cast<std::int64_t>(reps.size()), workers,
      [&](int, std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
          refined[static_cast<std::size_t>(i)] =
              refine_candidate(reps[static_cast<std::size_t>(i)], game, net,
                               mech);
        }
      });

  std::vector<EquilibriumRecord> records;
  for (const auto& x : refined) {
    if (field_norm_raw(x) > 1e-10) continue;
    bool fresh = true;
    for (const auto& rec : records) {
      if ((rec.x.mat() - x).cwiseAbs().maxCoeff() <= 1e-6) {
        fresh = false;
        break;
      }
    }
    if (!fresh) continue;
    EquilibriumRecord rec =
        classify_equilibrium(SystemState(x, net), game, net, mech);
    rec.classes.insert("oracle_found");
    records.push_back(std::move(rec));
  }

  std::sort(records.begin(), records.end(),
            [](const EquilibriumRecord& a, const EquilibriumRecord& b) {
              const auto sup_a = support_of(a.y), sup_b = support_of(b.y);
              if (sup_a != sup_b) return sup_a < sup_b;
              for (Eigen::Index i = 0; i < a.y.size(); ++i) {
                if (a.y[i] != b.y[i]) return a.y[i] < b.y[i];
              }
              for (Eigen::Index i = 0; i < a.x.mat().size(); ++i) {
                if (a.x.mat()(i) != b.x.mat()(i)) {
                  return a.x.mat()(i) < b.x.mat()(i);
                }
              }
              return false;
            });
  return records;
}

}  // namespace imitation
