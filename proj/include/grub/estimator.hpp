#pragma once

#include <Eigen/Dense>

#include <vector>

#include "grub/errors.hpp"
#include "grub/graph.hpp"

namespace grub {

/// Parameters of the confidence radius beta(t).
struct ConfidenceParams {
  double sigma;    // sub-Gaussian scale, > 0
  double delta;    // failure probability, in (0,1)
  double epsilon;  // certified smoothness bound, >= 0
  int n_arms;      // total arm count (kept fixed after eliminations)

  ConfidenceParams(double sigma, double delta, double epsilon, int n_arms);
};

/// beta(t) = 2*sigma*sqrt(14*ln(2n(t+1)^2/delta)) + rho*epsilon.
double beta(const ConfidenceParams& p, long t, double rho);

/// Estimated means with their confidence radii; widths are nonnegative and
/// finite whenever the design is positive definite.
struct MeanEstimate {
  Eigen::VectorXd mu_hat;
  Eigen::VectorXd widths;
};

/// Regularized design state of one run: pull counts, V = diag(counts) + rho*L,
/// a maintained inverse, and the reward accumulator. The state depends only on
/// the per-arm counts, never on pull order. Single-writer per run.
class DesignState {
 public:
  /// Fresh state: zero counts, V = rho*L, inverse not yet available.
  /// The component partition needed for identifiability tracking is recovered
  /// from the Laplacian's off-diagonal support.
  DesignState(const Laplacian& laplacian, double rho);

  /// Adds one observation of `arm`. While the inverse is live it is kept
  /// current with a rank-one update and re-solved from scratch every
  /// kRefreshInterval pulls to bound floating-point drift.
  void record_pull(int arm, double reward);

  /// True once every connected component has at least one sample
  /// (equivalently, V is positive definite).
  bool identifiable() const { return inverse_valid_; }

  const Eigen::MatrixXd& design() const { return v_; }

  /// Maintained V^{-1}; throws SingularDesignError before identifiability.
  const Eigen::MatrixXd& inverse() const;

  /// Closed-form estimate V^{-1} x, the minimizer of
  /// sum_t (r_t - mu_{pi_t})^2 + rho <mu, L mu>.
  Eigen::VectorXd mean_estimate() const;

  /// beta(t_arm) * sqrt([V^{-1}]_aa).
  double confidence_width(const ConfidenceParams& p, int arm) const;

  /// Estimate and all widths in one pass.
  MeanEstimate estimate_with_widths(const ConfidenceParams& p) const;

  const std::vector<long>& counts() const { return counts_; }
  long total_pulls() const { return total_pulls_; }
  const Eigen::VectorXd& reward_accumulator() const { return x_; }
  double rho() const { return rho_; }
  int n() const { return static_cast<int>(counts_.size()); }
  int component_count() const { return component_count_; }

  static constexpr long kRefreshInterval = 512;

 private:
  void refresh_inverse();

  Eigen::MatrixXd v_;
  Eigen::MatrixXd v_inv_;
  Eigen::VectorXd x_;
  std::vector<long> counts_;
  double rho_;
  long total_pulls_ = 0;
  bool inverse_valid_ = false;
  long updates_since_refresh_ = 0;

  std::vector<int> comp_of_;
  std::vector<char> comp_sampled_;
  int component_count_ = 0;
  int sampled_components_ = 0;
};

inline DesignState init_design(const Laplacian& laplacian, double rho) {
  return DesignState(laplacian, rho);
}

/// Identifiability checked against an explicit graph: every component of g
/// must contain a sampled arm.
bool is_identifiable(const DesignState& state, const SimilarityGraph& g);

}  // namespace grub
