#include "grub/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grub {

namespace {

constexpr double kZeroDiag = 1e-14;

Eigen::MatrixXd component_laplacian(const Laplacian& L, const std::vector<int>& nodes) {
  const int m = static_cast<int>(nodes.size());
  Eigen::MatrixXd lc(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) lc(r, c) = L.matrix(nodes[r], nodes[c]);
  return lc;
}

KMatrix k_matrix_local(const std::vector<int>& nodes, const Eigen::MatrixXd& lc, double rho,
                       int local_idx) {
  const int m = static_cast<int>(nodes.size());
  Eigen::MatrixXd v = rho * lc;
  v(local_idx, local_idx) += 1.0;
  Eigen::MatrixXd k = v.llt().solve(Eigen::MatrixXd::Identity(m, m));
  k.array() -= 1.0;  // V(one pull of i)^{-1} = 11' + K
  return KMatrix{nodes, std::move(k)};
}

}  // namespace

KMatrix k_matrix(const SimilarityGraph& g, const Laplacian& L, double rho, int sampled) {
  if (sampled < 0 || sampled >= g.n()) throw std::out_of_range("node index out of range");
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  const auto& nodes = g.components()[g.component_of(sampled)];
  if (nodes.size() < 2)
    throw DegenerateInfluenceError("isolated node has no K matrix");
  const int local = static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), sampled) -
                                     nodes.begin());
  return k_matrix_local(nodes, component_laplacian(L, nodes), rho, local);
}

double influence_factor(const SimilarityGraph& g, const Laplacian& L, double rho, int node) {
  if (node < 0 || node >= g.n()) throw std::out_of_range("node index out of range");
  const auto& nodes = g.components()[g.component_of(node)];
  const int m = static_cast<int>(nodes.size());
  if (m < 2) return 0.0;

  const Eigen::MatrixXd lc = component_laplacian(L, nodes);
  const int local_node = static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), node) -
                                          nodes.begin());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    if (i == local_node) continue;
    const KMatrix km = k_matrix_local(nodes, lc, rho, i);
    const double diag = km.k(local_node, local_node);
    if (diag <= kZeroDiag) continue;  // infinite influence, never the minimum
    best = std::min(best, 1.0 / diag);
  }
  if (!std::isfinite(best))
    throw DegenerateInfluenceError("all influence candidates have zero diagonal");
  return best;
}

double diag_upper_bound(long t_i, long total, double influence) {
  if (t_i > total) throw std::invalid_argument("arm count exceeds the total");
  if (t_i == 0) {
    if (!(influence > 0.0))
      throw std::invalid_argument("unsampled bound needs a positive influence factor");
    if (total < 1) throw std::invalid_argument("unsampled bound needs at least one sample");
    return 1.0 / influence + 1.0 / static_cast<double>(total);
  }
  // Sampled branch per the rank-one chaining: the pulls of other arms number
  // total - t_i, so the harmonic term is 1/(t_i + min(J, total - t_i)/2).
  // (t_i = total gives back the exact 1/t_i.)
  const double ti = static_cast<double>(t_i);
  const double others = static_cast<double>(total - t_i);
  return std::max(1.0 / (ti + influence / 2.0), 1.0 / (ti + others / 2.0));
}

InfluenceTable::InfluenceTable(const SimilarityGraph& g, const Laplacian& L, double rho)
    : rho_(rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  const int n = g.n();
  factors_.assign(n, 0.0);
  k_cache_.resize(n);

  for (const auto& nodes : g.components()) {
    const int m = static_cast<int>(nodes.size());
    if (m < 2) continue;  // isolated: factor stays 0, no K
    const Eigen::MatrixXd lc = component_laplacian(L, nodes);
    for (int i = 0; i < m; ++i) k_cache_[nodes[i]] = k_matrix_local(nodes, lc, rho, i);

    for (int j = 0; j < m; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (i == j) continue;
        const double diag = k_cache_[nodes[i]].k(j, j);
        if (diag <= kZeroDiag) continue;
        best = std::min(best, 1.0 / diag);
      }
      if (!std::isfinite(best))
        throw DegenerateInfluenceError("all influence candidates have zero diagonal");
      factors_[nodes[j]] = best;
    }
  }
}

const KMatrix& InfluenceTable::k_for(int sampled) const {
  if (sampled < 0 || sampled >= n()) throw std::out_of_range("node index out of range");
  const KMatrix& km = k_cache_[sampled];
  if (km.nodes.empty()) throw DegenerateInfluenceError("isolated node has no K matrix");
  return km;
}

}  // namespace grub
