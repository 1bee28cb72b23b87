#include "grub/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace grub {

int batch_worker_count() {
  if (const char* env = std::getenv("GRUB_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

BatchResult run_batch(const BanditInstance& instance, const SimilarityGraph& g,
                      const RunConfig& base, int n_runs) {
  if (n_runs < 1) throw ConfigError("n_runs must be at least 1");

  BatchResult result;
  result.runs.resize(n_runs);

  const int workers = std::min(batch_worker_count(), n_runs);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (int r = next.fetch_add(1); r < n_runs; r = next.fetch_add(1)) {
      try {
        RunConfig config = base;
        config.seed = base.seed + static_cast<std::uint64_t>(r);
        result.runs[r] = config.zeta.has_value() && *config.zeta > 0.0
                             ? zeta_grub_run(instance, g, config)
                             : grub_run(instance, g, config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  long horizon = 0;
  for (const auto& run : result.runs) horizon = std::max(horizon, run.total_pulls);
  result.by_step.reserve(horizon);
  std::vector<double> sizes(n_runs);
  for (long s = 1; s <= horizon; ++s) {
    for (int r = 0; r < n_runs; ++r) {
      const auto& steps = result.runs[r].steps;
      const long idx = std::min<long>(s, static_cast<long>(steps.size())) - 1;
      sizes[r] = steps[idx].active_count;
    }
    StepAggregate agg;
    agg.step = s;
    agg.mean_active = 0.0;
    for (double v : sizes) agg.mean_active += v;
    agg.mean_active /= n_runs;
    agg.min_active = static_cast<int>(*std::min_element(sizes.begin(), sizes.end()));
    agg.max_active = static_cast<int>(*std::max_element(sizes.begin(), sizes.end()));
    std::vector<double> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    agg.median_active = n_runs % 2 == 1 ? sorted[n_runs / 2]
                                        : 0.5 * (sorted[n_runs / 2 - 1] + sorted[n_runs / 2]);
    result.by_step.push_back(agg);
  }
  return result;
}

}  // namespace grub
