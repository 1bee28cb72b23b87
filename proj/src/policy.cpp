#include "grub/policy.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

namespace grub {

std::optional<PolicyKind> parse_policy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cyclic") return PolicyKind::cyclic;
  if (lower == "valko") return PolicyKind::valko;
  if (lower == "maxdiff") return PolicyKind::maxdiff;
  if (lower == "mintrace") return PolicyKind::mintrace;
  if (lower == "mindet") return PolicyKind::mindet;
  if (lower == "jvmo") return PolicyKind::jvmo;
  return std::nullopt;
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::cyclic: return "cyclic";
    case PolicyKind::valko: return "valko";
    case PolicyKind::maxdiff: return "maxdiff";
    case PolicyKind::mintrace: return "mintrace";
    case PolicyKind::mindet: return "mindet";
    case PolicyKind::jvmo: return "jvmo";
  }
  return "?";
}

int PolicySelector::next_arm(const DesignState& state, const std::vector<int>& active,
                             const SimilarityGraph& g) {
  if (active.empty()) throw std::invalid_argument("active set is empty");
  if (kind_ == PolicyKind::cyclic) return next_cyclic(state, active, g);
  if (!state.identifiable())
    throw SingularDesignError("score-based policies need an identifiable state");

  const Eigen::MatrixXd& inv = state.inverse();
  double best_score = 0.0;
  int best_arm = -1;
  // Scores within a relative 1e-12 of the leader count as ties (rank-one
  // update round-off would otherwise break exact symmetries), and ties keep
  // the lowest index.
  const auto improves = [&](double score) {
    return best_arm < 0 ||
           score > best_score + 1e-12 * std::max(1.0, std::abs(best_score));
  };
  for (int arm : active) {
    const double v = inv(arm, arm);
    double score = 0.0;
    switch (kind_) {
      case PolicyKind::valko:
        score = v;
        break;
      case PolicyKind::maxdiff:
        score = v * v / (1.0 + v);
        break;
      case PolicyKind::mindet:
        score = 1.0 + v;
        break;
      case PolicyKind::mintrace:
      case PolicyKind::jvmo:
        score = inv.col(arm).squaredNorm() / (1.0 + v);
        break;
      case PolicyKind::cyclic:
        break;  // handled above
    }
    if (improves(score)) {
      best_score = score;
      best_arm = arm;
    }
  }
  return best_arm;
}

int PolicySelector::next_cyclic(const DesignState& state, const std::vector<int>& active,
                                const SimilarityGraph& g) {
  long min_count = std::numeric_limits<long>::max();
  for (int arm : active) min_count = std::min(min_count, state.counts()[arm]);

  // A new round re-anchors the component walk, so every round visits the
  // active arms in the same order.
  if (min_count != round_count_) {
    round_count_ = min_count;
    component_cursor_ = 0;
  }

  const int k = g.component_count();
  for (int offset = 0; offset < k; ++offset) {
    const int c = (component_cursor_ + offset) % k;
    for (int arm : active) {
      if (state.counts()[arm] == min_count && g.component_of(arm) == c) {
        component_cursor_ = (c + 1) % k;
        return arm;
      }
    }
  }
  // Unreachable: some active arm attains the minimum count.
  throw std::logic_error("cyclic policy found no candidate");
}

}  // namespace grub
