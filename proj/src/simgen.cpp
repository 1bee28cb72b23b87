#include "grub/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace grub {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t run, StreamPurpose purpose) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0xA24BAED4963EE407ull * (run + 1);
  splitmix64(state);
  state ^= 0x9FB21C651E98DF25ull * static_cast<std::uint64_t>(purpose);
  return std::mt19937_64(splitmix64(state));
}

int BanditInstance::best_arm() const {
  int best = 0;
  for (int i = 1; i < n(); ++i)
    if (mu[i] > mu[best]) best = i;
  return best;
}

BanditInstance make_instance(const Laplacian& L, Eigen::VectorXd mu, double sigma) {
  if (mu.size() != L.size()) throw std::invalid_argument("mean/Laplacian size mismatch");
  if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
  BanditInstance instance;
  instance.epsilon_certificate = std::sqrt(std::max(0.0, smoothness(mu, L)));
  instance.mu = std::move(mu);
  instance.sigma = sigma;
  return instance;
}

namespace {

using EdgeList = std::vector<std::tuple<int, int, double>>;

void add_clique(EdgeList& edges, int first, int size) {
  for (int i = first; i < first + size; ++i)
    for (int j = i + 1; j < first + size; ++j) edges.emplace_back(i, j, 1.0);
}

SimilarityGraph gen_complete_clusters(const GraphSpec& s) {
  if (s.clusters < 1 || s.cluster_size < 1)
    throw ConfigError("complete_clusters needs clusters >= 1 and cluster_size >= 1");
  const int offset = s.isolated_optimal ? 1 : 0;
  const int n = offset + s.clusters * s.cluster_size;
  EdgeList edges;
  for (int c = 0; c < s.clusters; ++c) add_clique(edges, offset + c * s.cluster_size, s.cluster_size);
  return SimilarityGraph::from_edges(n, edges);
}

SimilarityGraph gen_sbm(const GraphSpec& s, std::mt19937_64& rng) {
  if (s.clusters < 1 || s.cluster_size < 1)
    throw ConfigError("sbm needs clusters >= 1 and cluster_size >= 1");
  if (!(0.0 <= s.q && s.q <= s.p && s.p <= 1.0))
    throw ConfigError("sbm needs 0 <= q <= p <= 1");
  const int offset = s.isolated_optimal ? 1 : 0;
  const int n = offset + s.clusters * s.cluster_size;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  EdgeList edges;
  for (int i = offset; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = (i - offset) / s.cluster_size == (j - offset) / s.cluster_size;
      if (unif(rng) < (same ? s.p : s.q)) edges.emplace_back(i, j, 1.0);
    }
  }
  return SimilarityGraph::from_edges(n, edges);
}

SimilarityGraph gen_barabasi_albert(const GraphSpec& s, std::mt19937_64& rng) {
  if (s.ba_m < 1 || s.n < s.ba_m)
    throw ConfigError("barabasi_albert needs 1 <= m <= n");
  const int offset = s.isolated_optimal ? 1 : 0;
  const int n = offset + s.n;
  EdgeList edges;
  // Complete core of m nodes, then degree-proportional attachment without
  // multi-edges: m distinct targets drawn from the endpoint multiset.
  add_clique(edges, offset, s.ba_m);
  std::vector<int> endpoints;
  for (int i = 0; i < s.ba_m; ++i)
    for (int j = i + 1; j < s.ba_m; ++j) {
      endpoints.push_back(offset + i);
      endpoints.push_back(offset + j);
    }
  for (int v = offset + s.ba_m; v < n; ++v) {
    std::vector<int> targets;
    if (endpoints.empty()) {  // m = 1 start: core has no edges yet
      targets.push_back(offset);
    } else {
      while (static_cast<int>(targets.size()) < s.ba_m) {
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        const int candidate = endpoints[pick(rng)];
        if (std::find(targets.begin(), targets.end(), candidate) == targets.end())
          targets.push_back(candidate);
      }
    }
    for (int t : targets) {
      edges.emplace_back(v, t, 1.0);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return SimilarityGraph::from_edges(n, edges);
}

SimilarityGraph gen_star(const GraphSpec& s) {
  if (s.n < 1) throw ConfigError("star needs n >= 1");
  const int offset = s.isolated_optimal ? 1 : 0;
  const int n = offset + s.n;
  EdgeList edges;
  for (int v = offset + 1; v < n; ++v) edges.emplace_back(offset, v, 1.0);
  return SimilarityGraph::from_edges(n, edges);
}

SimilarityGraph gen_line(const GraphSpec& s) {
  if (s.n < 1) throw ConfigError("line needs n >= 1");
  const int offset = s.isolated_optimal ? 1 : 0;
  const int n = offset + s.n;
  EdgeList edges;
  for (int v = offset; v + 1 < n; ++v) edges.emplace_back(v, v + 1, 1.0);
  return SimilarityGraph::from_edges(n, edges);
}

}  // namespace

SimilarityGraph generate_graph(const GraphSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng = make_stream(seed, 0, StreamPurpose::graph);
  switch (spec.kind) {
    case GraphKind::complete_clusters: return gen_complete_clusters(spec);
    case GraphKind::sbm: return gen_sbm(spec, rng);
    case GraphKind::barabasi_albert: return gen_barabasi_albert(spec, rng);
    case GraphKind::star: return gen_star(spec);
    case GraphKind::line: return gen_line(spec);
  }
  throw ConfigError("unknown graph kind");
}

Eigen::VectorXd generate_means(const SimilarityGraph& g, const Laplacian& L,
                               double target_epsilon, const std::vector<double>& cluster_levels,
                               std::uint64_t seed, double spread) {
  if (target_epsilon < 0.0) throw ConfigError("target_epsilon must be nonnegative");
  if (static_cast<int>(cluster_levels.size()) != g.component_count())
    throw ConfigError("need one base level per connected component");

  std::mt19937_64 rng = make_stream(seed, 0, StreamPurpose::means);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  Eigen::VectorXd pert(g.n());
  for (int i = 0; i < g.n(); ++i) pert[i] = spread * unif(rng);

  const double norm = std::sqrt(std::max(0.0, smoothness(pert, L)));
  const double scale = target_epsilon <= 0.0 ? 0.0
                       : norm > 0.0          ? std::min(1.0, target_epsilon / norm)
                                             : 1.0;
  Eigen::VectorXd mu(g.n());
  for (int i = 0; i < g.n(); ++i) mu[i] = cluster_levels[g.component_of(i)] + scale * pert[i];
  return mu;
}

double sample_reward(const BanditInstance& instance, int arm, std::mt19937_64& rng) {
  if (arm < 0 || arm >= instance.n()) throw std::out_of_range("arm index out of range");
  std::normal_distribution<double> noise(0.0, 1.0);
  return instance.mu[arm] + instance.sigma * noise(rng);
}

Eigen::VectorXd read_means_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open means file: " + path);
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double v;
    ss >> v;
    if (ss.fail())
      throw ConfigError(path + ": malformed mean on line " + std::to_string(line_no));
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError(path + ": empty means file");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
}

void write_means_file(const std::string& path, const Eigen::VectorXd& mu) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write means file: " + path);
  out.precision(17);
  for (int i = 0; i < mu.size(); ++i) out << mu[i] << "\n";
}

}  // namespace grub
