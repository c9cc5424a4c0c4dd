#ifndef IMITATION_TYPES_HPP
#define IMITATION_TYPES_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace imitation {

// Construction tolerances. Sums within tolerance are rescaled to the exact
// constraint so downstream code can rely on crisp invariants.
inline constexpr double kSimplexSumTol = 1e-12;
inline constexpr double kColumnSumTol = 1e-10;

/// Finite ordered set of action labels.
class ActionSet {
 public:
  explicit ActionSet(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index(const std::string& label) const;  // throws on unknown label

  bool operator==(const ActionSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Distribution of the population over actions; lives on the unit simplex.
/// Entries must be nonnegative and sum to 1 within kSimplexSumTol; the sum
/// is rescaled to exactly 1 at construction (zero entries stay zero).
class PopulationState {
 public:
  explicit PopulationState(Eigen::VectorXd y);

  int size() const { return static_cast<int>(y_.size()); }
  double operator[](int i) const { return y_[i]; }
  const Eigen::VectorXd& vec() const { return y_; }

 private:
  Eigen::VectorXd y_;
};

/// Communities, their relative sizes eta (positive, summing to 1) and the
/// nonnegative interaction-weight matrix W (positive diagonal).
class CommunityNetwork {
 public:
  CommunityNetwork(std::vector<std::string> communities, Eigen::VectorXd eta,
                   Eigen::MatrixXd W);

  int size() const { return static_cast<int>(communities_.size()); }
  const std::vector<std::string>& communities() const { return communities_; }
  const Eigen::VectorXd& eta() const { return eta_; }
  const Eigen::MatrixXd& W() const { return W_; }

 private:
  std::vector<std::string> communities_;
  Eigen::VectorXd eta_;
  Eigen::MatrixXd W_;
};

/// Action-by-community matrix of population fractions. Column h sums to
/// eta_h; columns within kColumnSumTol of the constraint are rescaled
/// exactly at construction (scaling preserves zeros).
class SystemState {
 public:
  SystemState(Eigen::MatrixXd x, const CommunityNetwork& net);

  int actions() const { return static_cast<int>(x_.rows()); }
  int communities() const { return static_cast<int>(x_.cols()); }
  const Eigen::MatrixXd& mat() const { return x_; }
  double operator()(int i, int h) const { return x_(i, h); }

 private:
  Eigen::MatrixXd x_;
};

/// Population state corresponding to a system state: row sums of x.
PopulationState population_state(const SystemState& x);

/// The system state with x_ih = y_i * eta_h (every community hosts the
/// population-wide action distribution).
SystemState balanced_state(const PopulationState& y,
                           const CommunityNetwork& net);

/// True iff max_{i,h} |x_ih - y_i eta_h| <= tol with y the row sums of x.
bool is_balanced(const SystemState& x, const CommunityNetwork& net,
                 double tol);

/// Actions with strictly positive share (exact positivity).
std::vector<int> support(const PopulationState& y);
std::vector<int> support_of(const Eigen::VectorXd& y);

/// True iff the directed graph with an edge (h,k) whenever W_hk > 0 is
/// strongly connected.
bool is_connected(const CommunityNetwork& net);

/// True iff W equals its transpose exactly.
bool is_undirected(const CommunityNetwork& net);

}  // namespace imitation

#endif
