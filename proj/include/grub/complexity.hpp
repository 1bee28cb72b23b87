#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "grub/errors.hpp"
#include "grub/estimator.hpp"
#include "grub/graph.hpp"
#include "grub/influence.hpp"

namespace grub {

enum class ArmClass { highly_competitive, weakly_competitive, noncompetitive };
const char* arm_class_name(ArmClass cls);

/// Partition of the arms by how their gap compares to the graph-dependent
/// thresholds. The best arm always lands in the highly competitive set; an
/// arm meeting both thresholds is filed as noncompetitive.
struct CompetitiveSplit {
  int best_arm = 0;
  Eigen::VectorXd gaps;          // gap_j = mu_best - mu_j
  std::vector<ArmClass> classes;

  int n() const { return static_cast<int>(classes.size()); }
  int count(ArmClass cls) const;
};

/// Gap thresholds (gamma-scaled versions used by the gamma variant):
///   highly:  gap <= 2 sqrt(2/((1-g)J)) (2 sigma sqrt(14 ln(2 J^2 |C|/delta)) + rho eps)
///   noncomp: gap >= 2 sqrt(1/(1-g) + 2/((1-g)J)) (2 sigma sqrt(14 ln(2 |C|/delta)) + rho eps)
/// Isolated nodes (J = 0) have both thresholds infinite and fall in the
/// highly competitive set. The J^2 under the log is floored at 1 so the
/// highly threshold diverges, rather than collapsing, as J -> 0.
CompetitiveSplit classify_arms(const Eigen::VectorXd& mu, const SimilarityGraph& g,
                               const InfluenceTable& influence, double rho,
                               const ConfidenceParams& params);

/// Leading constants of the bound; the conservative pair doubles them.
enum class BoundConstant { standard, conservative };  // 112/112 vs 448/224

/// Worst-case round count:
///   sum over components of
///     sum_{j in H, j != best} max(0, [c s^2 ln(c_log s^2 sqrt(2n)/(sqrt(d) gap^2)) + rho eps/2]/gap^2 - J_j/2)
///   + max{max_{l in W} J_l, |W|}  per component
///   + k(G).
double sample_complexity(const CompetitiveSplit& split, const SimilarityGraph& g,
                         const InfluenceTable& influence, const ConfidenceParams& params,
                         double rho, BoundConstant constant = BoundConstant::standard);

/// Candidate graph for the gamma variant, with the gamma to account for.
struct GammaCandidate {
  SimilarityGraph graph;
  double gamma = 0.0;
};

struct GammaCandidateOutcome {
  bool accepted = false;
  double measured_gamma = 0.0;  // on the compatible subspace when accepted
  double t_gamma = 0.0;         // valid when accepted
  std::string reason;           // set when rejected
};

struct GammaComplexityResult {
  double best_t = 0.0;
  int best_index = -1;  // into the candidate list
  std::vector<GammaCandidateOutcome> outcomes;
};

/// Evaluates the gamma-adjusted bound on each candidate and returns the
/// minimum. A candidate is accepted when its component partition refines the
/// base graph's (it may only split components, never merge) and the measured
/// gamma on the compatible subspace is within the stated one. With the base
/// graph itself at gamma = 0 this reduces exactly to sample_complexity.
GammaComplexityResult gamma_complexity(const SimilarityGraph& base,
                                       const std::vector<GammaCandidate>& candidates,
                                       const Eigen::VectorXd& mu, const ConfidenceParams& params,
                                       double rho,
                                       BoundConstant constant = BoundConstant::standard);

/// Same bound with the per-arm denominator gap^2 replaced by
/// max{gap^2, zeta^2}; the split itself is unchanged. Monotone non-increasing
/// in zeta.
double zeta_complexity(const CompetitiveSplit& split, const SimilarityGraph& g,
                       const InfluenceTable& influence, const ConfidenceParams& params,
                       double rho, double zeta,
                       BoundConstant constant = BoundConstant::standard);

struct HighArmImprovement {
  int arm = -1;
  double ratio = 0.0;     // graph-free term over graph term; +inf when the graph term is <= 0
  double margin = 0.0;    // J - rho*eps/gap^2
  bool net_positive = false;  // rho*eps < J * gap^2
};

struct ImprovementReport {
  double noncompetitive_ratio = 0.0;            // |N| / k(G)
  double weakly_bound = 0.0;                    // max over components of (|C|/4) ln(|C|/delta)
  std::vector<HighArmImprovement> highly_arms;  // suboptimal H arms only
};

ImprovementReport improvement_ratio(const CompetitiveSplit& split, const SimilarityGraph& g,
                                    const InfluenceTable& influence,
                                    const ConfidenceParams& params, double rho,
                                    BoundConstant constant = BoundConstant::standard);

/// Everything the complexity subcommand prints.
struct ComplexityReport {
  CompetitiveSplit split;
  std::vector<double> influence_factors;
  double t_bound = 0.0;
  std::optional<double> t_zeta;
  ImprovementReport improvement;
  int component_count = 0;
};

ComplexityReport build_report(const Eigen::VectorXd& mu, const SimilarityGraph& g,
                              const InfluenceTable& influence, const ConfidenceParams& params,
                              double rho, std::optional<double> zeta,
                              BoundConstant constant = BoundConstant::standard);

}  // namespace grub
