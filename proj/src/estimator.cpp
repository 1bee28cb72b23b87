#include "grub/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace grub {

ConfidenceParams::ConfidenceParams(double sigma_in, double delta_in, double epsilon_in,
                                   int n_arms_in)
    : sigma(sigma_in), delta(delta_in), epsilon(epsilon_in), n_arms(n_arms_in) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (n_arms < 1) throw ConfigError("n_arms must be at least 1");
}

double beta(const ConfidenceParams& p, long t, double rho) {
  const double tt = static_cast<double>(t) + 1.0;
  return 2.0 * p.sigma * std::sqrt(14.0 * std::log(2.0 * p.n_arms * tt * tt / p.delta)) +
         rho * p.epsilon;
}

DesignState::DesignState(const Laplacian& laplacian, double rho) : rho_(rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  const int n = laplacian.size();
  if (n < 1) throw ConfigError("design needs at least one arm");

  v_ = rho * laplacian.matrix;
  x_ = Eigen::VectorXd::Zero(n);
  counts_.assign(n, 0);

  // Component structure from the Laplacian's off-diagonal support.
  Eigen::MatrixXd support = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (laplacian.matrix(i, j) != 0.0) support(i, j) = support(j, i) = 1.0;
  const auto parts = connected_components(support);
  component_count_ = static_cast<int>(parts.size());
  comp_of_.assign(n, -1);
  for (int c = 0; c < component_count_; ++c)
    for (int v : parts[c]) comp_of_[v] = c;
  comp_sampled_.assign(component_count_, 0);
}

void DesignState::record_pull(int arm, double reward) {
  if (arm < 0 || arm >= n()) throw std::out_of_range("arm index out of range");
  ++counts_[arm];
  ++total_pulls_;
  v_(arm, arm) += 1.0;
  x_[arm] += reward;

  const int c = comp_of_[arm];
  if (!comp_sampled_[c]) {
    comp_sampled_[c] = 1;
    ++sampled_components_;
  }

  if (inverse_valid_) {
    if (++updates_since_refresh_ >= kRefreshInterval) {
      refresh_inverse();
    } else {
      // Sherman-Morrison: (V + e e')^{-1} = V^{-1} - V^{-1}e e'V^{-1}/(1 + [V^{-1}]_aa)
      const Eigen::VectorXd col = v_inv_.col(arm);
      v_inv_.noalias() -= (col * col.transpose()) / (1.0 + col(arm));
    }
  } else if (sampled_components_ == component_count_) {
    refresh_inverse();
  }
}

void DesignState::refresh_inverse() {
  v_inv_ = v_.llt().solve(Eigen::MatrixXd::Identity(n(), n()));
  inverse_valid_ = true;
  updates_since_refresh_ = 0;
}

const Eigen::MatrixXd& DesignState::inverse() const {
  if (!inverse_valid_)
    throw SingularDesignError("design matrix is singular: a component has no samples");
  return v_inv_;
}

Eigen::VectorXd DesignState::mean_estimate() const { return inverse() * x_; }

double DesignState::confidence_width(const ConfidenceParams& p, int arm) const {
  if (arm < 0 || arm >= n()) throw std::out_of_range("arm index out of range");
  const double diag = inverse()(arm, arm);
  return beta(p, counts_[arm], rho_) * std::sqrt(std::max(diag, 0.0));
}

MeanEstimate DesignState::estimate_with_widths(const ConfidenceParams& p) const {
  MeanEstimate estimate;
  estimate.mu_hat = mean_estimate();
  estimate.widths.resize(n());
  for (int i = 0; i < n(); ++i) estimate.widths[i] = confidence_width(p, i);
  return estimate;
}

bool is_identifiable(const DesignState& state, const SimilarityGraph& g) {
  if (g.n() != state.n()) throw std::invalid_argument("graph/state size mismatch");
  for (const auto& part : g.components()) {
    bool sampled = false;
    for (int v : part) {
      if (state.counts()[v] > 0) {
        sampled = true;
        break;
      }
    }
    if (!sampled) return false;
  }
  return true;
}

}  // namespace grub
