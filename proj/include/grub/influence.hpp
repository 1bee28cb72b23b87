#pragma once

#include <Eigen/Dense>

#include <vector>

#include "grub/errors.hpp"
#include "grub/graph.hpp"

namespace grub {

/// The K(i) matrix of a sampled node i, restricted to its component:
/// the unique PSD matrix with 1 e_i' + rho K L_C = I and zero i-th row/column.
/// Computed as (e_i e_i' + rho L_C)^{-1} - 11'.
struct KMatrix {
  std::vector<int> nodes;  // component members, ascending; k uses local indices
  Eigen::MatrixXd k;
};

KMatrix k_matrix(const SimilarityGraph& g, const Laplacian& L, double rho, int sampled);

/// Minimum influence factor of `node`:
///   min over sampled candidates i != node in the component of 1/[K(i)]_jj,
/// 0 for isolated nodes. Candidates with a zero diagonal are skipped.
double influence_factor(const SimilarityGraph& g, const Laplacian& L, double rho, int node);

/// Diagonal bound for connected components:
///   t_i = 0: 1/J + 1/T;  t_i > 0: max{1/(t_i + J/2), 1/(t_i + (T - t_i)/2)}.
double diag_upper_bound(long t_i, long total, double influence);

/// Per-node minimum influence factors with the K matrices behind them,
/// computed once per graph (one dense solve per candidate sampled node).
class InfluenceTable {
 public:
  InfluenceTable(const SimilarityGraph& g, const Laplacian& L, double rho);

  double factor(int node) const { return factors_.at(node); }
  const std::vector<double>& factors() const { return factors_; }
  const KMatrix& k_for(int sampled) const;
  double rho() const { return rho_; }
  int n() const { return static_cast<int>(factors_.size()); }

 private:
  std::vector<double> factors_;
  std::vector<KMatrix> k_cache_;  // indexed by sampled node; empty for isolated
  double rho_;
};

}  // namespace grub
