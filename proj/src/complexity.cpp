#include "grub/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lead_constant(BoundConstant c) {
  return c == BoundConstant::standard ? 112.0 : 448.0;
}
double log_constant(BoundConstant c) {
  return c == BoundConstant::standard ? 112.0 : 224.0;
}

double clamped_radical(double log_arg) {
  return std::sqrt(14.0 * std::max(0.0, std::log(log_arg)));
}

struct Thresholds {
  double highly = kInf;
  double noncompetitive = kInf;
};

Thresholds gap_thresholds(double influence, int component_size, const ConfidenceParams& p,
                          double rho, double gamma) {
  Thresholds t;
  if (influence <= 0.0) return t;  // isolated: both infinite
  const double shrink = 1.0 - gamma;
  // The J^2 under the log tracks (t+1)^2 <= J^2 in the elimination budget;
  // pull counts are at least 0, so it is floored at 1. Without the floor the
  // radicand goes negative for bottleneck nodes and the threshold would
  // collapse instead of diverging as J -> 0.
  const double j_log = std::max(influence, 1.0);
  const double rad_h = clamped_radical(2.0 * j_log * j_log * component_size / p.delta);
  t.highly = 2.0 * std::sqrt(2.0 / (shrink * influence)) *
             (2.0 * p.sigma * rad_h + rho * p.epsilon);
  const double rad_n = clamped_radical(2.0 * component_size / p.delta);
  t.noncompetitive = 2.0 * std::sqrt(1.0 / shrink + 2.0 / (shrink * influence)) *
                     (2.0 * p.sigma * rad_n + rho * p.epsilon);
  return t;
}

CompetitiveSplit classify_impl(const Eigen::VectorXd& mu, const SimilarityGraph& g,
                               const InfluenceTable& influence, double rho,
                               const ConfidenceParams& params, double gamma) {
  if (mu.size() != g.n()) throw std::invalid_argument("mean/graph size mismatch");
  if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("gamma must lie in [0,1)");

  CompetitiveSplit split;
  split.best_arm = 0;
  for (int i = 1; i < g.n(); ++i)
    if (mu[i] > mu[split.best_arm]) split.best_arm = i;
  split.gaps = Eigen::VectorXd::Constant(g.n(), mu[split.best_arm]) - mu;
  split.classes.resize(g.n());

  for (int j = 0; j < g.n(); ++j) {
    const int csize = static_cast<int>(g.components()[g.component_of(j)].size());
    const Thresholds t = gap_thresholds(influence.factor(j), csize, params, rho, gamma);
    const double gap = split.gaps[j];
    if (gap >= t.noncompetitive)
      split.classes[j] = ArmClass::noncompetitive;
    else if (gap <= t.highly)
      split.classes[j] = ArmClass::highly_competitive;
    else
      split.classes[j] = ArmClass::weakly_competitive;
  }
  return split;
}

// Per-arm highly-competitive term before the zero floor.
double highly_term(double gap_sq_denom, double gap_sq_log, double influence,
                   const ConfidenceParams& p, double rho, BoundConstant constant,
                   double gamma) {
  const double shrink = 1.0 - gamma;
  const double sigma_sq = p.sigma * p.sigma;
  const double log_arg = log_constant(constant) * sigma_sq * std::sqrt(2.0) *
                         std::sqrt(static_cast<double>(p.n_arms)) /
                         (shrink * std::sqrt(p.delta) * gap_sq_log);
  const double bracket =
      lead_constant(constant) * sigma_sq * std::log(log_arg) + rho * p.epsilon / 2.0;
  return bracket / (shrink * gap_sq_denom) - influence / 2.0;
}

double bound_impl(const CompetitiveSplit& split, const SimilarityGraph& g,
                  const InfluenceTable& influence, const ConfidenceParams& params, double rho,
                  BoundConstant constant, double gamma, double zeta) {
  if (split.n() != g.n()) throw std::invalid_argument("split/graph size mismatch");
  for (int j = 0; j < split.n(); ++j)
    if (j != split.best_arm && split.gaps[j] == 0.0)
      throw MultipleOptimaError("a non-best arm shares the maximum mean");

  double total = 0.0;
  for (const auto& part : g.components()) {
    double w_max_influence = 0.0;
    int w_count = 0;
    for (int j : part) {
      switch (split.classes[j]) {
        case ArmClass::highly_competitive: {
          if (j == split.best_arm) break;
          const double gap_sq = split.gaps[j] * split.gaps[j];
          const double denom = std::max(gap_sq, zeta * zeta);
          total += std::max(
              0.0, highly_term(denom, gap_sq, influence.factor(j), params, rho, constant, gamma));
          break;
        }
        case ArmClass::weakly_competitive:
          ++w_count;
          w_max_influence = std::max(w_max_influence, influence.factor(j));
          break;
        case ArmClass::noncompetitive:
          break;
      }
    }
    total += std::max(w_max_influence, static_cast<double>(w_count));
  }
  return total + g.component_count();
}

}  // namespace

const char* arm_class_name(ArmClass cls) {
  switch (cls) {
    case ArmClass::highly_competitive: return "H";
    case ArmClass::weakly_competitive: return "W";
    case ArmClass::noncompetitive: return "N";
  }
  return "?";
}

int CompetitiveSplit::count(ArmClass cls) const {
  return static_cast<int>(std::count(classes.begin(), classes.end(), cls));
}

CompetitiveSplit classify_arms(const Eigen::VectorXd& mu, const SimilarityGraph& g,
                               const InfluenceTable& influence, double rho,
                               const ConfidenceParams& params) {
  return classify_impl(mu, g, influence, rho, params, 0.0);
}

double sample_complexity(const CompetitiveSplit& split, const SimilarityGraph& g,
                         const InfluenceTable& influence, const ConfidenceParams& params,
                         double rho, BoundConstant constant) {
  return bound_impl(split, g, influence, params, rho, constant, 0.0, 0.0);
}

double zeta_complexity(const CompetitiveSplit& split, const SimilarityGraph& g,
                       const InfluenceTable& influence, const ConfidenceParams& params,
                       double rho, double zeta, BoundConstant constant) {
  if (!(zeta > 0.0)) throw ConfigError("zeta must be positive");
  return bound_impl(split, g, influence, params, rho, constant, 0.0, zeta);
}

namespace {

// Does `candidate`'s partition refine `base`'s (only split, never merge)?
bool refines(const SimilarityGraph& candidate, const SimilarityGraph& base) {
  for (const auto& part : candidate.components()) {
    const int root = base.component_of(part.front());
    for (int v : part)
      if (base.component_of(v) != root) return false;
  }
  return true;
}

// Gamma measured on the complement of the candidate's null space (the shared
// non-null directions when the candidate refines the base).
double measured_gamma(const Laplacian& base_l, const SimilarityGraph& candidate,
                      const Laplacian& cand_l) {
  const auto closeness = gamma_closeness(base_l, cand_l);
  if (closeness.compatible) return closeness.gamma;

  // Partitions differ: restrict both forms to the candidate's non-null space.
  Eigen::MatrixXd q;
  {
    const int n = candidate.n();
    int dim = 0;
    for (const auto& part : candidate.components()) dim += static_cast<int>(part.size()) - 1;
    q = Eigen::MatrixXd::Zero(n, dim);
    int col = 0;
    for (const auto& part : candidate.components()) {
      const int m = static_cast<int>(part.size());
      if (m < 2) continue;
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m - 1);
      for (int k = 1; k < m; ++k) {
        d(0, k - 1) = -1.0;
        d(k, k - 1) = 1.0;
      }
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(d);
      Eigen::MatrixXd local = qr.householderQ() * Eigen::MatrixXd::Identity(m, m - 1);
      for (int k = 0; k < m - 1; ++k, ++col)
        for (int r = 0; r < m; ++r) q(part[r], col) = local(r, k);
    }
  }
  if (q.cols() == 0) return 0.0;
  const Eigen::MatrixXd a = q.transpose() * cand_l.matrix * q;
  const Eigen::MatrixXd b = q.transpose() * base_l.matrix * q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized eigensolve failed");
  return std::max({solver.eigenvalues().maxCoeff() - 1.0,
                   1.0 - solver.eigenvalues().minCoeff(), 0.0});
}

}  // namespace

GammaComplexityResult gamma_complexity(const SimilarityGraph& base,
                                       const std::vector<GammaCandidate>& candidates,
                                       const Eigen::VectorXd& mu, const ConfidenceParams& params,
                                       double rho, BoundConstant constant) {
  if (candidates.empty()) throw ConfigError("gamma_complexity needs at least one candidate");
  const Laplacian base_l = build_laplacian(base);

  GammaComplexityResult result;
  result.best_t = kInf;
  result.outcomes.resize(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const GammaCandidate& cand = candidates[c];
    GammaCandidateOutcome& out = result.outcomes[c];
    if (cand.graph.n() != base.n()) {
      out.reason = "node count differs from the base graph";
      continue;
    }
    if (cand.gamma < 0.0 || cand.gamma >= 1.0) {
      out.reason = "gamma must lie in [0,1)";
      continue;
    }
    if (!refines(cand.graph, base)) {
      out.reason = "candidate merges base components";
      continue;
    }
    const Laplacian cand_l = build_laplacian(cand.graph);
    out.measured_gamma = measured_gamma(base_l, cand.graph, cand_l);
    if (out.measured_gamma > cand.gamma + 1e-12) {
      out.reason = "measured gamma exceeds the stated gamma";
      continue;
    }

    const InfluenceTable influence(cand.graph, cand_l, rho);
    const CompetitiveSplit split =
        classify_impl(mu, cand.graph, influence, rho, params, cand.gamma);
    out.t_gamma =
        bound_impl(split, cand.graph, influence, params, rho, constant, cand.gamma, 0.0);
    out.accepted = true;
    if (out.t_gamma < result.best_t) {
      result.best_t = out.t_gamma;
      result.best_index = static_cast<int>(c);
    }
  }
  if (result.best_index < 0) throw ConfigError("no candidate passed the gamma-closeness gate");
  return result;
}

ImprovementReport improvement_ratio(const CompetitiveSplit& split, const SimilarityGraph& g,
                                    const InfluenceTable& influence,
                                    const ConfidenceParams& params, double rho,
                                    BoundConstant constant) {
  ImprovementReport report;
  report.noncompetitive_ratio =
      static_cast<double>(split.count(ArmClass::noncompetitive)) / g.component_count();

  for (const auto& part : g.components()) {
    const bool has_w = std::any_of(part.begin(), part.end(), [&](int j) {
      return split.classes[j] == ArmClass::weakly_competitive;
    });
    if (!has_w) continue;
    const double csize = static_cast<double>(part.size());
    report.weakly_bound =
        std::max(report.weakly_bound, csize / 4.0 * std::log(csize / params.delta));
  }

  const double sigma_sq = params.sigma * params.sigma;
  for (int j = 0; j < split.n(); ++j) {
    if (j == split.best_arm || split.classes[j] != ArmClass::highly_competitive) continue;
    const double gap_sq = split.gaps[j] * split.gaps[j];
    HighArmImprovement arm;
    arm.arm = j;
    const double factor = influence.factor(j);
    arm.margin = factor - rho * params.epsilon / gap_sq;
    arm.net_positive = rho * params.epsilon < factor * gap_sq;
    const double log_arg = log_constant(constant) * sigma_sq * std::sqrt(2.0) *
                           std::sqrt(static_cast<double>(params.n_arms)) /
                           (std::sqrt(params.delta) * gap_sq);
    const double no_graph = lead_constant(constant) * sigma_sq * std::log(log_arg) / gap_sq;
    const double with_graph =
        highly_term(gap_sq, gap_sq, factor, params, rho, constant, 0.0);
    arm.ratio = with_graph > 0.0 ? no_graph / with_graph : kInf;
    report.highly_arms.push_back(arm);
  }
  return report;
}

ComplexityReport build_report(const Eigen::VectorXd& mu, const SimilarityGraph& g,
                              const InfluenceTable& influence, const ConfidenceParams& params,
                              double rho, std::optional<double> zeta, BoundConstant constant) {
  ComplexityReport report;
  report.split = classify_arms(mu, g, influence, rho, params);
  report.influence_factors = influence.factors();
  report.t_bound = sample_complexity(report.split, g, influence, params, rho, constant);
  if (zeta && *zeta > 0.0)
    report.t_zeta = zeta_complexity(report.split, g, influence, params, rho, *zeta, constant);
  report.improvement = improvement_ratio(report.split, g, influence, params, rho, constant);
  report.component_count = g.component_count();
  return report;
}

}  // namespace grub
