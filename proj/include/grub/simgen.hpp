#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "grub/errors.hpp"
#include "grub/graph.hpp"

namespace grub {

/// A synthetic bandit: true means, Gaussian noise scale, and the smoothness
/// certificate sqrt(<mu, L mu>) of the paired graph.
struct BanditInstance {
  Eigen::VectorXd mu;
  double sigma = 1.0;
  double epsilon_certificate = 0.0;

  int n() const { return static_cast<int>(mu.size()); }
  int best_arm() const;  // lowest index on ties
};

BanditInstance make_instance(const Laplacian& L, Eigen::VectorXd mu, double sigma);

enum class GraphKind { complete_clusters, sbm, barabasi_albert, star, line };

struct GraphSpec {
  GraphKind kind = GraphKind::complete_clusters;
  int clusters = 0;      // complete_clusters, sbm: number of blocks
  int cluster_size = 0;  // complete_clusters, sbm: nodes per block
  double p = 0.0;        // sbm: intra-block edge probability
  double q = 0.0;        // sbm: inter-block edge probability
  int ba_m = 0;          // barabasi_albert: attachments per new node
  int n = 0;             // barabasi_albert, star, line: node count
  bool isolated_optimal = false;  // prepend an isolated node at index 0
};

/// Deterministic for a fixed seed; unit edge weights.
SimilarityGraph generate_graph(const GraphSpec& spec, std::uint64_t seed);

/// Base mean per component plus a uniform perturbation in
/// [-spread/2, spread/2], globally rescaled by min(1, eps/|pert|_G) so the
/// result is exactly target_epsilon-smooth or better. Component constants
/// carry zero smoothness, so the levels themselves are unconstrained.
Eigen::VectorXd generate_means(const SimilarityGraph& g, const Laplacian& L,
                               double target_epsilon, const std::vector<double>& cluster_levels,
                               std::uint64_t seed, double spread = 1.0);

/// mu_arm + sigma * z with z standard normal from the given stream.
double sample_reward(const BanditInstance& instance, int arm, std::mt19937_64& rng);

/// Named deterministic stream family: one generator per (seed, run, purpose),
/// mixed through splitmix64 so policy choice never perturbs reward draws.
enum class StreamPurpose : std::uint64_t { rewards = 1, graph = 2, means = 3 };
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t run, StreamPurpose purpose);

/// One decimal per line, n lines.
Eigen::VectorXd read_means_file(const std::string& path);
void write_means_file(const std::string& path, const Eigen::VectorXd& mu);

}  // namespace grub
