#include "grub/engine.hpp"

#include <algorithm>
#include <limits>

namespace grub {

const char* termination_name(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::singleton: return "singleton";
    case TerminationReason::zeta: return "zeta";
    case TerminationReason::cap: return "cap";
  }
  return "?";
}

void cluster_init(DesignState& state, const SimilarityGraph& g, const RewardSource& draw,
                  RunTrace& trace) {
  for (const auto& part : g.components()) {
    const int arm = part.front();
    const double reward = draw(arm);
    state.record_pull(arm, reward);
    trace.steps.push_back(StepRecord{static_cast<long>(trace.steps.size()) + 1, arm, reward,
                                     g.n(), {}});
  }
}

std::vector<int> eliminate(const std::vector<int>& active, const DesignState& state,
                           const ConfidenceParams& params) {
  if (active.empty()) throw std::invalid_argument("active set is empty");
  const MeanEstimate estimate = state.estimate_with_widths(params);
  const Eigen::VectorXd& mu = estimate.mu_hat;
  const Eigen::VectorXd& width = estimate.widths;

  int a_max = active.front();
  double best_lower = -std::numeric_limits<double>::infinity();
  for (int arm : active) {
    const double lower = mu[arm] - width[arm];
    if (lower > best_lower) {
      best_lower = lower;
      a_max = arm;
    }
  }

  std::vector<int> kept;
  kept.reserve(active.size());
  for (int arm : active) {
    if (mu[a_max] - mu[arm] <= width[a_max] + width[arm]) kept.push_back(arm);
  }
  return kept;
}

namespace {

int empirical_best(const std::vector<int>& active, const Eigen::VectorXd& mu) {
  int best = active.front();
  for (int arm : active)
    if (mu[arm] > mu[best]) best = arm;
  return best;
}

RunTrace run_impl(const BanditInstance& instance, const SimilarityGraph& g,
                  const RunConfig& config) {
  if (instance.n() != g.n()) throw ConfigError("instance/graph size mismatch");
  if (config.params.n_arms != g.n()) throw ConfigError("params.n_arms must match the graph");
  if (config.zeta && *config.zeta < 0.0) throw ConfigError("zeta must be nonnegative");
  const long max_steps = config.max_steps > 0 ? config.max_steps : 50l * g.n();
  if (max_steps < g.n()) throw ConfigError("max_steps must be at least n");

  std::mt19937_64 rewards = make_stream(config.seed, 0, StreamPurpose::rewards);
  const RewardSource draw = [&](int arm) { return sample_reward(instance, arm, rewards); };

  DesignState state(build_laplacian(g), config.rho);
  RunTrace trace;
  cluster_init(state, g, draw, trace);

  std::vector<int> active(g.n());
  for (int i = 0; i < g.n(); ++i) active[i] = i;

  PolicySelector selector(config.policy);
  long step = static_cast<long>(trace.steps.size());
  const bool zeta_mode = config.zeta.has_value() && *config.zeta > 0.0;

  while (static_cast<int>(active.size()) > 1) {
    if (zeta_mode) {
      bool all_resolved = true;
      for (int arm : active) {
        if (2.0 * state.confidence_width(config.params, arm) > *config.zeta) {
          all_resolved = false;
          break;
        }
      }
      if (all_resolved) {
        trace.winner = empirical_best(active, state.mean_estimate());
        trace.terminated_by = TerminationReason::zeta;
        trace.total_pulls = step;
        return trace;
      }
    }
    if (step >= max_steps) {
      trace.winner = empirical_best(active, state.mean_estimate());
      trace.terminated_by = TerminationReason::cap;
      trace.total_pulls = step;
      return trace;
    }

    ++step;
    const int arm = selector.next_arm(state, active, g);
    const double reward = draw(arm);
    state.record_pull(arm, reward);

    const std::vector<int> kept = eliminate(active, state, config.params);
    std::vector<int> removed;
    std::set_difference(active.begin(), active.end(), kept.begin(), kept.end(),
                        std::back_inserter(removed));
    active = kept;
    trace.steps.push_back(
        StepRecord{step, arm, reward, static_cast<int>(active.size()), std::move(removed)});
  }

  trace.winner = active.front();
  trace.terminated_by = TerminationReason::singleton;
  trace.total_pulls = step;
  return trace;
}

}  // namespace

RunTrace grub_run(const BanditInstance& instance, const SimilarityGraph& g,
                  const RunConfig& config) {
  if (config.zeta.has_value() && *config.zeta != 0.0)
    throw ConfigError("grub_run is the exact mode; use zeta_grub_run for zeta > 0");
  return run_impl(instance, g, config);
}

RunTrace zeta_grub_run(const BanditInstance& instance, const SimilarityGraph& g,
                       const RunConfig& config) {
  if (!config.zeta.has_value() || !(*config.zeta > 0.0))
    throw ConfigError("zeta_grub_run needs zeta > 0");
  return run_impl(instance, g, config);
}

}  // namespace grub
