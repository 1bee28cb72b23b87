#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "grub/estimator.hpp"
#include "grub/graph.hpp"
#include "grub/policy.hpp"
#include "grub/simgen.hpp"

namespace grub {

struct RunConfig {
  ConfidenceParams params;
  double rho = 1.0;
  std::optional<double> zeta;  // absent: exact best-arm mode
  PolicyKind policy = PolicyKind::cyclic;
  long max_steps = 0;  // 0: defaults to 50 * n
  std::uint64_t seed = 0;
};

enum class TerminationReason { singleton, zeta, cap };
const char* termination_name(TerminationReason reason);

struct StepRecord {
  long step = 0;  // 1-based pull index
  int arm = -1;
  double reward = 0.0;
  int active_count = 0;            // after this step's elimination
  std::vector<int> eliminated;     // arms removed this step
};

struct RunTrace {
  std::vector<StepRecord> steps;
  int winner = -1;
  long total_pulls = 0;
  TerminationReason terminated_by = TerminationReason::singleton;
};

using RewardSource = std::function<double(int arm)>;

/// One pull per connected component (the lowest-index arm of each), in
/// ascending component order; leaves the state identifiable.
void cluster_init(DesignState& state, const SimilarityGraph& g, const RewardSource& draw,
                  RunTrace& trace);

/// Elimination sweep: a_max is the active arm with the highest lower bound
/// mu_i - width_i; arms are kept iff
///   mu_{a_max} - mu_a <= width_{a_max} + width_a.
/// a_max itself always survives. `active` must be sorted ascending.
std::vector<int> eliminate(const std::vector<int>& active, const DesignState& state,
                           const ConfidenceParams& params);

/// Best-arm identification: init, then sample-update-eliminate until a single
/// arm remains or the step cap is hit. Rewards come from the run's seeded
/// stream; identical (config, seed) give identical traces.
RunTrace grub_run(const BanditInstance& instance, const SimilarityGraph& g,
                  const RunConfig& config);

/// Approximate variant: additionally stops once every surviving arm has
/// 2 * width <= zeta and returns the empirical best among them.
RunTrace zeta_grub_run(const BanditInstance& instance, const SimilarityGraph& g,
                       const RunConfig& config);

}  // namespace grub
