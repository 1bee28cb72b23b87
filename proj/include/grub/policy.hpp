#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grub/estimator.hpp"
#include "grub/graph.hpp"

namespace grub {

enum class PolicyKind { cyclic, valko, maxdiff, mintrace, mindet, jvmo };

std::optional<PolicyKind> parse_policy(std::string_view name);  // case-insensitive
const char* policy_name(PolicyKind kind);

/// Arm selection. The score-based rules need an identifiable state and are
/// evaluated from the maintained inverse via the rank-one identities:
///   valko     max [V^{-1}]_ii
///   maxdiff   max v^2/(1+v), v = [V^{-1}]_ii (own squared-width decrement)
///   mindet    min 1/(det V * (1 + [V^{-1}]_ii)), i.e. max 1 + [V^{-1}]_ii
///   mintrace  min Tr V^{-1} - |V^{-1}e_i|^2/(1+[V^{-1}]_ii)
///   jvmo      max |Row_i(V^{-1})|^2 / (1 + [V^{-1}]_ii)
/// cyclic visits components round-robin, arms in index order, and never
/// resamples an arm before every active arm has the same count.
/// Ties break toward the lowest arm index everywhere.
class PolicySelector {
 public:
  explicit PolicySelector(PolicyKind kind) : kind_(kind) {}

  /// `active` must be nonempty and sorted ascending.
  int next_arm(const DesignState& state, const std::vector<int>& active,
               const SimilarityGraph& g);

  PolicyKind kind() const { return kind_; }

 private:
  int next_cyclic(const DesignState& state, const std::vector<int>& active,
                  const SimilarityGraph& g);

  PolicyKind kind_;
  int component_cursor_ = 0;
  long round_count_ = -1;  // min active count of the round in progress
};

}  // namespace grub
