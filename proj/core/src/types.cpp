#include "imitation/types.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace imitation {

ActionSet::ActionSet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw std::invalid_argument("ActionSet: at least one action required");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw std::invalid_argument("ActionSet: labels must be unique");
  }
}

int ActionSet::index(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw std::invalid_argument("ActionSet: unknown label '" + label + "'");
}

PopulationState::PopulationState(Eigen::VectorXd y) : y_(std::move(y)) {
  if (y_.size() == 0) {
    throw std::invalid_argument("PopulationState: empty vector");
  }
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i]) || y_[i] < 0.0) {
      throw std::invalid_argument(
          "PopulationState: entries must be finite and nonnegative");
    }
  }
  const double sum = y_.sum();
  if (std::abs(sum - 1.0) > kSimplexSumTol) {
    throw std::invalid_argument("PopulationState: entries must sum to 1");
  }
  y_ /= sum;
}

CommunityNetwork::CommunityNetwork(std::vector<std::string> communities,
                                   Eigen::VectorXd eta, Eigen::MatrixXd W)
    : communities_(std::move(communities)),
      eta_(std::move(eta)),
      W_(std::move(W)) {
  const int n = static_cast<int>(communities_.size());
  if (n == 0) {
    throw std::invalid_argument("CommunityNetwork: no communities");
  }
  std::set<std::string> seen(communities_.begin(), communities_.end());
  if (static_cast<int>(seen.size()) != n) {
    throw std::invalid_argument("CommunityNetwork: labels must be unique");
  }
  if (eta_.size() != n || W_.rows() != n || W_.cols() != n) {
    throw std::invalid_argument("CommunityNetwork: inconsistent dimensions");
  }
  for (int h = 0; h < n; ++h) {
    if (!(eta_[h] > 0.0) || !std::isfinite(eta_[h])) {
      throw std::invalid_argument("CommunityNetwork: eta entries must be > 0");
    }
  }
  const double sum = eta_.sum();
  if (std::abs(sum - 1.0) > kSimplexSumTol) {
    throw std::invalid_argument("CommunityNetwork: eta must sum to 1");
  }
  eta_ /= sum;
  for (int h = 0; h < n; ++h) {
    for (int k = 0; k < n; ++k) {
      if (!std::isfinite(W_(h, k)) || W_(h, k) < 0.0) {
        throw std::invalid_argument(
            "CommunityNetwork: W entries must be finite and nonnegative");
      }
    }
    if (!(W_(h, h) > 0.0)) {
      throw std::invalid_argument(
          "CommunityNetwork: diagonal of W must be strictly positive");
    }
  }
}

SystemState::SystemState(Eigen::MatrixXd x, const CommunityNetwork& net)
    : x_(std::move(x)) {
  if (x_.cols() != net.size()) {
    throw std::invalid_argument("SystemState: column count != |communities|");
  }
  if (x_.rows() < 1) {
    throw std::invalid_argument("SystemState: at least one action required");
  }
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    for (Eigen::Index h = 0; h < x_.cols(); ++h) {
      if (!std::isfinite(x_(i, h)) || x_(i, h) < 0.0) {
        throw std::invalid_argument(
            "SystemState: entries must be finite and nonnegative");
      }
    }
  }
  for (Eigen::Index h = 0; h < x_.cols(); ++h) {
    const double want = net.eta()[h];
    const double got = x_.col(h).sum();
    if (std::abs(got - want) > kColumnSumTol) {
      throw std::invalid_argument(
          "SystemState: column sums must equal community sizes");
    }
    if (got > 0.0) x_.col(h) *= want / got;
  }
}

PopulationState population_state(const SystemState& x) {
  return PopulationState(x.mat().rowwise().sum());
}

SystemState balanced_state(const PopulationState& y,
                           const CommunityNetwork& net) {
  return SystemState(y.vec() * net.eta().transpose(), net);
}

bool is_balanced(const SystemState& x, const CommunityNetwork& net,
                 double tol) {
  const Eigen::VectorXd y = x.mat().rowwise().sum();
  const Eigen::MatrixXd target = y * net.eta().transpose();
  return (x.mat() - target).cwiseAbs().maxCoeff() <= tol;
}

std::vector<int> support_of(const Eigen::VectorXd& y) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) s.push_back(static_cast<int>(i));
  }
  return s;
}

std::vector<int> support(const PopulationState& y) {
  return support_of(y.vec());
}

bool is_connected(const CommunityNetwork& net) {
  const int n = net.size();
  // boolean reachability closure over the positivity pattern
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int h = 0; h < n; ++h) {
    for (int k = 0; k < n; ++k) {
      reach[h][k] = net.W()(h, k) > 0.0;
    }
  }
  for (int m = 0; m < n; ++m) {
    for (int h = 0; h < n; ++h) {
      if (!reach[h][m]) continue;
      for (int k = 0; k < n; ++k) {
        if (reach[m][k]) reach[h][k] = true;
      }
    }
  }
  for (int h = 0; h < n; ++h) {
    for (int k = 0; k < n; ++k) {
      if (!reach[h][k]) return false;
    }
  }
  return true;
}

bool is_undirected(const CommunityNetwork& net) {
  return net.W() == net.W().transpose();
}

}  // namespace imitation
