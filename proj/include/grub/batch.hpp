#pragma once

#include <vector>

#include "grub/engine.hpp"
#include "grub/simgen.hpp"

namespace grub {

struct StepAggregate {
  long step = 0;
  double mean_active = 0.0;
  int min_active = 0;
  int max_active = 0;
  double median_active = 0.0;
};

struct BatchResult {
  std::vector<RunTrace> runs;           // in run order
  std::vector<StepAggregate> by_step;   // finished runs carry their final size forward
};

/// n_runs engine runs with seeds base.seed + 0 .. n_runs - 1, executed across
/// workers (GRUB_THREADS caps the count) and aggregated in run order, so the
/// result is deterministic in the base seed.
BatchResult run_batch(const BanditInstance& instance, const SimilarityGraph& g,
                      const RunConfig& base, int n_runs);

/// Worker count: GRUB_THREADS when set, else hardware concurrency, at least 1.
int batch_worker_count();

}  // namespace grub
