#include <doctest.h>

#include <map>
#include <random>

#include "grub/policy.hpp"
#include "oracles.hpp"

using grub::build_laplacian;
using grub::DesignState;
using grub::PolicyKind;
using grub::PolicySelector;
using grub::SimilarityGraph;

namespace {

// Random identifiable state over a random connected graph.
struct RandomState {
  SimilarityGraph g;
  DesignState state;
};

RandomState make_random_state(std::mt19937_64& rng, int n = 6) {
  auto g = oracle::random_connected_graph(n, rng);
  DesignState state(build_laplacian(g), 1.0);
  std::uniform_int_distribution<int> arm(0, n - 1);
  std::uniform_int_distribution<int> len(1, 15);
  std::normal_distribution<double> reward;
  const int total = len(rng);
  for (int t = 0; t < total; ++t) state.record_pull(arm(rng), reward(rng));
  return RandomState{std::move(g), std::move(state)};
}

std::vector<int> all_arms(int n) {
  std::vector<int> arms(n);
  for (int i = 0; i < n; ++i) arms[i] = i;
  return arms;
}

}  // namespace

TEST_CASE("policy parsing is case-insensitive and exhaustive") {
  CHECK(grub::parse_policy("Cyclic") == PolicyKind::cyclic);
  CHECK(grub::parse_policy("VALKO") == PolicyKind::valko);
  CHECK(grub::parse_policy("maxdiff") == PolicyKind::maxdiff);
  CHECK(grub::parse_policy("MinTrace") == PolicyKind::mintrace);
  CHECK(grub::parse_policy("mindet") == PolicyKind::mindet);
  CHECK(grub::parse_policy("jvmo") == PolicyKind::jvmo);
  CHECK_FALSE(grub::parse_policy("ucb").has_value());
}

TEST_CASE("fully symmetric states break ties toward the lowest index") {
  const auto g = oracle::complete_graph(4);
  DesignState state(build_laplacian(g), 1.0);
  for (int i = 0; i < 4; ++i) state.record_pull(i, 0.0);
  for (PolicyKind kind : {PolicyKind::cyclic, PolicyKind::valko, PolicyKind::maxdiff,
                          PolicyKind::mintrace, PolicyKind::mindet, PolicyKind::jvmo}) {
    PolicySelector selector(kind);
    CHECK(selector.next_arm(state, all_arms(4), g) == 0);
  }
}

TEST_CASE("policy errors") {
  const auto g = oracle::complete_graph(3);
  DesignState state(build_laplacian(g), 1.0);
  PolicySelector valko(PolicyKind::valko);
  CHECK_THROWS_AS(valko.next_arm(state, {}, g), std::invalid_argument);
  CHECK_THROWS_AS(valko.next_arm(state, all_arms(3), g), grub::SingularDesignError);
  PolicySelector cyclic(PolicyKind::cyclic);
  CHECK(cyclic.next_arm(state, all_arms(3), g) == 0);  // cyclic needs no inverse
}

TEST_CASE("mindet and maxdiff agree with valko on 100 random states") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    auto rs = make_random_state(rng);
    const auto active = all_arms(rs.g.n());
    PolicySelector valko(PolicyKind::valko), mindet(PolicyKind::mindet),
        maxdiff(PolicyKind::maxdiff);
    const int pick = valko.next_arm(rs.state, active, rs.g);
    CHECK(mindet.next_arm(rs.state, active, rs.g) == pick);
    CHECK(maxdiff.next_arm(rs.state, active, rs.g) == pick);
  }
}

TEST_CASE("mintrace and jvmo agree on 100 random states") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    auto rs = make_random_state(rng);
    const auto active = all_arms(rs.g.n());
    PolicySelector mintrace(PolicyKind::mintrace), jvmo(PolicyKind::jvmo);
    CHECK(mintrace.next_arm(rs.state, active, rs.g) ==
          jvmo.next_arm(rs.state, active, rs.g));
  }
}

TEST_CASE("rank-one identities match brute-force post-pull matrices") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    auto rs = make_random_state(rng);
    const Eigen::MatrixXd& v = rs.state.design();
    const Eigen::MatrixXd& inv = rs.state.inverse();
    const double det_v = oracle::dense_determinant(v);
    for (int i = 0; i < rs.g.n(); ++i) {
      Eigen::MatrixXd bumped = v;
      bumped(i, i) += 1.0;
      // Determinant lemma: det(V + e e') = det(V) (1 + [V^{-1}]_ii).
      CHECK(oracle::dense_determinant(bumped) ==
            doctest::Approx(det_v * (1.0 + inv(i, i))).epsilon(1e-8));
      // Trace decrement equals |V^{-1} e_i|^2 / (1 + [V^{-1}]_ii).
      const double fresh_trace = oracle::dense_inverse(bumped).trace();
      const double predicted =
          inv.trace() - inv.col(i).squaredNorm() / (1.0 + inv(i, i));
      CHECK(fresh_trace == doctest::Approx(predicted).epsilon(1e-8));
    }
  }
}

TEST_CASE("selection is invariant under uniform scaling of the inverse diagonal") {
  // valko and mindet are monotone transforms of the same diagonal.
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    auto rs = make_random_state(rng);
    const Eigen::VectorXd diag = rs.state.inverse().diagonal();
    int argmax_raw = 0, argmax_scaled = 0;
    for (int i = 1; i < diag.size(); ++i) {
      if (diag[i] > diag[argmax_raw]) argmax_raw = i;
      if (3.7 * diag[i] > 3.7 * diag[argmax_scaled]) argmax_scaled = i;
    }
    CHECK(argmax_raw == argmax_scaled);
    PolicySelector valko(PolicyKind::valko);
    const int pick = valko.next_arm(rs.state, all_arms(rs.g.n()), rs.g);
    // The selector treats sub-1e-12 relative differences as ties.
    CHECK(diag[pick] >= diag[argmax_raw] * (1.0 - 1e-11));
  }
}

TEST_CASE("all rules stay inside the active set") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    auto rs = make_random_state(rng);
    std::vector<int> active;
    for (int i = 0; i < rs.g.n(); ++i)
      if (i % 2 == trial % 2 || i == 0) active.push_back(i);
    for (PolicyKind kind : {PolicyKind::cyclic, PolicyKind::valko, PolicyKind::maxdiff,
                            PolicyKind::mintrace, PolicyKind::mindet, PolicyKind::jvmo}) {
      PolicySelector selector(kind);
      const int pick = selector.next_arm(rs.state, active, rs.g);
      CHECK(std::find(active.begin(), active.end(), pick) != active.end());
    }
  }
}

TEST_CASE("cyclic fairness: no resample before every active arm is pulled") {
  // The guarantee is per active-set epoch: windows that cross an elimination
  // are exempt because the round order re-forms.
  std::mt19937_64 rng(83);
  const auto g = oracle::clustered_graph({3, 3, 2}, false);
  DesignState state(build_laplacian(g), 1.0);
  PolicySelector cyclic(PolicyKind::cyclic);

  std::vector<int> active = all_arms(g.n());
  std::map<int, long> last_pull;
  std::vector<int> pulls;
  long epoch_start = 0;
  for (int step = 0; step < 64; ++step) {
    if (step == 30) {  // drop an arm mid-run
      active.erase(active.begin() + 2);
      epoch_start = static_cast<long>(pulls.size());
    }
    const int arm = cyclic.next_arm(state, active, g);
    state.record_pull(arm, 0.0);
    pulls.push_back(arm);

    if (last_pull.count(arm) && last_pull[arm] >= epoch_start) {
      for (int other : active) {
        if (other == arm) continue;
        bool pulled_between = false;
        for (long t = last_pull[arm] + 1; t < static_cast<long>(pulls.size()) - 1; ++t)
          if (pulls[t] == other) pulled_between = true;
        CHECK(pulled_between);
      }
    }
    last_pull[arm] = static_cast<long>(pulls.size()) - 1;
  }
}

TEST_CASE("cyclic walks components round-robin") {
  const auto g = oracle::clustered_graph({2, 2}, false);
  DesignState state(build_laplacian(g), 1.0);
  PolicySelector cyclic(PolicyKind::cyclic);
  std::vector<int> picks;
  for (int step = 0; step < 4; ++step) {
    const int arm = cyclic.next_arm(state, all_arms(4), g);
    state.record_pull(arm, 0.0);
    picks.push_back(arm);
  }
  CHECK(picks == std::vector<int>{0, 2, 1, 3});
}
