#pragma once

#include <Eigen/Dense>

#include <string>
#include <tuple>
#include <vector>

#include "grub/errors.hpp"

namespace grub {

/// Combinatorial Laplacian L = D - A of a similarity graph.
/// Symmetric, zero row sums, positive semidefinite; nullity equals the
/// number of connected components.
struct Laplacian {
  Eigen::MatrixXd matrix;

  int size() const { return static_cast<int>(matrix.rows()); }
};

/// Weighted undirected graph on arm indices. Edge weights are nonnegative
/// with a zero diagonal. Immutable after construction; the connected-component
/// partition is computed once and cached, so instances can be shared
/// read-only across concurrent runs.
class SimilarityGraph {
 public:
  /// Validates symmetry, nonnegativity and zero diagonal.
  explicit SimilarityGraph(Eigen::MatrixXd adjacency);

  /// n isolated nodes (L = 0); the graph-free baseline.
  static SimilarityGraph edgeless(int n);

  /// Build from an undirected edge list (u, v, w). Each edge listed once.
  static SimilarityGraph from_edges(int n,
                                    const std::vector<std::tuple<int, int, double>>& edges);

  int n() const { return static_cast<int>(adj_.rows()); }
  const Eigen::MatrixXd& adjacency() const { return adj_; }

  /// Partition of [n] into connected components, each sorted ascending,
  /// parts ordered by smallest member.
  const std::vector<std::vector<int>>& components() const { return components_; }
  int component_of(int v) const;
  int component_count() const { return static_cast<int>(components_.size()); }

 private:
  Eigen::MatrixXd adj_;
  std::vector<std::vector<int>> components_;
  std::vector<int> comp_of_;
};

Laplacian build_laplacian(const SimilarityGraph& g);

/// Components of an adjacency matrix (positive-weight connectivity),
/// via union-find; parts in ascending order of smallest member.
std::vector<std::vector<int>> connected_components(const Eigen::MatrixXd& adjacency);

inline const std::vector<std::vector<int>>& connected_components(const SimilarityGraph& g) {
  return g.components();
}

/// Smoothness seminorm squared: <mu, L mu> = sum_{i<j} A_ij (mu_i - mu_j)^2.
double smoothness(const Eigen::VectorXd& mu, const Laplacian& L);

struct GammaCloseness {
  bool compatible = false;  // false when the component structures differ
  double gamma = 0.0;
};

/// Smallest gamma with (1-g) y'L_ref y <= y'L_other y <= (1+g) y'L_ref y for
/// all y orthogonal to the shared null space. Requires identical component
/// structure; reports incompatible otherwise.
GammaCloseness gamma_closeness(const Laplacian& reference, const Laplacian& other);

/// Reads the edge-list format: first line "n <N>", then "u v w" lines with
/// 0-based indices, w > 0, each undirected edge listed once.
SimilarityGraph read_graph_file(const std::string& path);

}  // namespace grub
