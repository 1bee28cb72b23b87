#include "grub/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace grub {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

void validate_adjacency(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidGraphError("adjacency matrix must be square");
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw InvalidGraphError("graph must have at least one node");
  for (int i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw InvalidGraphError("self loops are not allowed");
    for (int j = i + 1; j < n; ++j) {
      if (a(i, j) != a(j, i)) throw InvalidGraphError("adjacency matrix must be symmetric");
      if (a(i, j) < 0.0) throw InvalidGraphError("negative edge weight");
    }
  }
}

}  // namespace

std::vector<std::vector<int>> connected_components(const Eigen::MatrixXd& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacency(i, j) > 0.0) uf.unite(i, j);

  std::vector<std::vector<int>> parts;
  std::vector<int> part_of(n, -1);
  for (int v = 0; v < n; ++v) {
    const int root = uf.find(v);
    if (part_of[root] < 0) {
      part_of[root] = static_cast<int>(parts.size());
      parts.emplace_back();
    }
    parts[part_of[root]].push_back(v);
  }
  // Members are appended in ascending order, and a part is created when its
  // smallest member is seen, so both orderings hold by construction.
  return parts;
}

SimilarityGraph::SimilarityGraph(Eigen::MatrixXd adjacency) : adj_(std::move(adjacency)) {
  validate_adjacency(adj_);
  components_ = grub::connected_components(adj_);
  comp_of_.assign(n(), -1);
  for (int c = 0; c < static_cast<int>(components_.size()); ++c)
    for (int v : components_[c]) comp_of_[v] = c;
}

SimilarityGraph SimilarityGraph::edgeless(int n) {
  if (n <= 0) throw InvalidGraphError("graph must have at least one node");
  return SimilarityGraph(Eigen::MatrixXd::Zero(n, n));
}

SimilarityGraph SimilarityGraph::from_edges(
    int n, const std::vector<std::tuple<int, int, double>>& edges) {
  if (n <= 0) throw InvalidGraphError("graph must have at least one node");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v, w] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) throw InvalidGraphError("edge endpoint out of range");
    if (u == v) throw InvalidGraphError("self loops are not allowed");
    if (w <= 0.0) throw InvalidGraphError("edge weight must be positive");
    if (a(u, v) != 0.0) throw InvalidGraphError("duplicate edge");
    a(u, v) = w;
    a(v, u) = w;
  }
  return SimilarityGraph(std::move(a));
}

int SimilarityGraph::component_of(int v) const {
  if (v < 0 || v >= n()) throw std::out_of_range("node index out of range");
  return comp_of_[v];
}

Laplacian build_laplacian(const SimilarityGraph& g) {
  const Eigen::MatrixXd& a = g.adjacency();
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return Laplacian{std::move(l)};
}

double smoothness(const Eigen::VectorXd& mu, const Laplacian& L) {
  if (mu.size() != L.matrix.rows()) throw std::invalid_argument("dimension mismatch");
  return mu.dot(L.matrix * mu);
}

namespace {

// Recover the component partition from the off-diagonal support of a
// combinatorial Laplacian (L_ij = -A_ij for i != j).
std::vector<std::vector<int>> laplacian_components(const Eigen::MatrixXd& l) {
  const int n = static_cast<int>(l.rows());
  Eigen::MatrixXd support = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (l(i, j) != 0.0) support(i, j) = support(j, i) = 1.0;
  return connected_components(support);
}

// Orthonormal basis (columns) of the complement of span{1_C : components C}.
Eigen::MatrixXd component_complement_basis(const std::vector<std::vector<int>>& parts, int n) {
  int dim = 0;
  for (const auto& part : parts) dim += static_cast<int>(part.size()) - 1;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, dim);
  int col = 0;
  for (const auto& part : parts) {
    const int m = static_cast<int>(part.size());
    if (m < 2) continue;
    // Within the component, differences e_k - e_0 span the complement of 1_C;
    // orthonormalize them with a thin QR.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m - 1);
    for (int k = 1; k < m; ++k) {
      d(0, k - 1) = -1.0;
      d(k, k - 1) = 1.0;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(d);
    Eigen::MatrixXd local =
        qr.householderQ() * Eigen::MatrixXd::Identity(m, m - 1);
    for (int k = 0; k < m - 1; ++k, ++col)
      for (int r = 0; r < m; ++r) q(part[r], col) = local(r, k);
  }
  return q;
}

}  // namespace

GammaCloseness gamma_closeness(const Laplacian& reference, const Laplacian& other) {
  if (reference.size() != other.size())
    throw std::invalid_argument("Laplacian dimension mismatch");

  const auto parts_ref = laplacian_components(reference.matrix);
  const auto parts_other = laplacian_components(other.matrix);
  if (parts_ref != parts_other) return GammaCloseness{false, 0.0};

  const int n = reference.size();
  const Eigen::MatrixXd q = component_complement_basis(parts_ref, n);
  if (q.cols() == 0) return GammaCloseness{true, 0.0};  // both forms vanish

  const Eigen::MatrixXd a = q.transpose() * other.matrix * q;
  const Eigen::MatrixXd b = q.transpose() * reference.matrix * q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized eigensolve failed");
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  const double gamma = std::max({hi - 1.0, 1.0 - lo, 0.0});
  return GammaCloseness{true, gamma};
}

SimilarityGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open graph file: " + path);

  std::string line;
  int n = -1;
  std::vector<std::tuple<int, int, double>> edges;
  std::set<std::pair<int, int>> seen;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (n < 0) {
      std::string tag;
      ss >> tag >> n;
      if (ss.fail() || tag != "n" || n <= 0)
        throw InvalidGraphError(path + ": expected header 'n <N>' on line " +
                                std::to_string(line_no));
      continue;
    }
    int u, v;
    double w;
    ss >> u >> v >> w;
    if (ss.fail())
      throw InvalidGraphError(path + ": malformed edge on line " + std::to_string(line_no));
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw InvalidGraphError(path + ": endpoint out of range on line " + std::to_string(line_no));
    if (u == v) throw InvalidGraphError(path + ": self loop on line " + std::to_string(line_no));
    if (w <= 0.0)
      throw InvalidGraphError(path + ": edge weight must be positive on line " +
                              std::to_string(line_no));
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw InvalidGraphError(path + ": duplicate edge on line " + std::to_string(line_no));
    edges.emplace_back(u, v, w);
  }
  if (n < 0) throw InvalidGraphError(path + ": missing header 'n <N>'");
  return SimilarityGraph::from_edges(n, edges);
}

}  // namespace grub
