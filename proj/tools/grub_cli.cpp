// Command-line front end: run experiments, print influence tables and
// sample-complexity reports, and check gamma-closeness of two graphs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grub/batch.hpp"
#include "grub/complexity.hpp"
#include "grub/engine.hpp"
#include "grub/errors.hpp"
#include "grub/graph.hpp"
#include "grub/influence.hpp"
#include "grub/simgen.hpp"

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Generator spec strings: "clusters:m=10,k=10,iso=1", "sbm:m=10,k=10,p=0.9,q=0.1",
// "ba:n=20,m=3", "star:n=10", "line:n=5".
grub::GraphSpec parse_graph_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw grub::ConfigError("graph spec needs 'kind:key=value,...'");
  const std::string kind = text.substr(0, colon);

  grub::GraphSpec spec;
  if (kind == "clusters") spec.kind = grub::GraphKind::complete_clusters;
  else if (kind == "sbm") spec.kind = grub::GraphKind::sbm;
  else if (kind == "ba") spec.kind = grub::GraphKind::barabasi_albert;
  else if (kind == "star") spec.kind = grub::GraphKind::star;
  else if (kind == "line") spec.kind = grub::GraphKind::line;
  else throw grub::ConfigError("unknown graph kind: " + kind);

  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw grub::ConfigError("bad graph spec entry: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "m" && spec.kind == grub::GraphKind::barabasi_albert) spec.ba_m = std::stoi(value);
      else if (key == "m") spec.clusters = std::stoi(value);
      else if (key == "k") spec.cluster_size = std::stoi(value);
      else if (key == "p") spec.p = std::stod(value);
      else if (key == "q") spec.q = std::stod(value);
      else if (key == "n") spec.n = std::stoi(value);
      else if (key == "iso") spec.isolated_optimal = std::stoi(value) != 0;
      else throw grub::ConfigError("unknown graph spec key: " + key);
    } catch (const std::invalid_argument&) {
      throw grub::ConfigError("bad graph spec value: " + item);
    }
  }
  return spec;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      levels.push_back(std::stod(item));
    } catch (const std::invalid_argument&) {
      throw grub::ConfigError("bad level value: " + item);
    }
  }
  if (levels.empty()) throw grub::ConfigError("empty level list");
  return levels;
}

struct OutStream {
  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw grub::FileError("cannot write output file: " + path);
    }
  }
  std::ostream& get() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

struct RunOptions {
  std::string graph_file, gen_spec;
  std::string means_file, levels;
  double mean_eps = 0.0;
  double mean_spread = 1.0;
  std::string save_means;
  std::string policy = "cyclic";
  double rho = 1.0, epsilon = 0.0, delta = 0.05, sigma = 1.0;
  double zeta = 0.0;
  std::uint64_t seed = 0;
  int runs = 1;
  long max_steps = 0;
  std::string out, manifest;
};

int cmd_run(const RunOptions& opt) {
  if (opt.graph_file.empty() == opt.gen_spec.empty())
    throw grub::ConfigError("need exactly one graph source (--graph or --gen)");
  if (opt.means_file.empty() == opt.levels.empty())
    throw grub::ConfigError("need exactly one means source (--means or --levels)");

  const grub::SimilarityGraph g = opt.graph_file.empty()
                                      ? grub::generate_graph(parse_graph_spec(opt.gen_spec), opt.seed)
                                      : grub::read_graph_file(opt.graph_file);
  const grub::Laplacian laplacian = grub::build_laplacian(g);

  Eigen::VectorXd mu;
  if (!opt.means_file.empty()) {
    mu = grub::read_means_file(opt.means_file);
    if (mu.size() != g.n()) throw grub::ConfigError("means file length does not match the graph");
  } else {
    mu = grub::generate_means(g, laplacian, opt.mean_eps, parse_levels(opt.levels), opt.seed,
                              opt.mean_spread);
  }
  const grub::BanditInstance instance = grub::make_instance(laplacian, mu, opt.sigma);
  if (!opt.save_means.empty()) grub::write_means_file(opt.save_means, mu);

  const auto policy = grub::parse_policy(opt.policy);
  if (!policy) throw grub::ConfigError("unknown policy: " + opt.policy);

  grub::RunConfig config{grub::ConfidenceParams(opt.sigma, opt.delta, opt.epsilon, g.n()),
                         opt.rho,
                         opt.zeta > 0.0 ? std::optional<double>(opt.zeta) : std::nullopt,
                         *policy,
                         opt.max_steps,
                         opt.seed};

  const grub::BatchResult batch = grub::run_batch(instance, g, config, opt.runs);

  OutStream out(opt.out);
  std::ostream& os = out.get();
  os << "run,step,pulled_arm,reward,active_count,eliminated\n";
  for (int r = 0; r < opt.runs; ++r) {
    const grub::RunTrace& trace = batch.runs[r];
    for (const auto& s : trace.steps) {
      os << r << ',' << s.step << ',' << s.arm << ',' << fmt9(s.reward) << ',' << s.active_count
         << ',';
      for (std::size_t i = 0; i < s.eliminated.size(); ++i) {
        if (i) os << ';';
        os << s.eliminated[i];
      }
      os << '\n';
    }
    os << r << ',' << trace.winner << ',' << trace.total_pulls << ','
       << grub::termination_name(trace.terminated_by) << '\n';
  }

  if (!opt.manifest.empty()) {
    nlohmann::json m;
    m["graph"] = opt.graph_file.empty() ? "gen:" + opt.gen_spec : "file:" + opt.graph_file;
    m["means"] = opt.means_file.empty() ? "levels:" + opt.levels : "file:" + opt.means_file;
    m["seed"] = opt.seed;
    m["runs"] = opt.runs;
    m["policy"] = opt.policy;
    m["rho"] = opt.rho;
    m["epsilon"] = opt.epsilon;
    m["delta"] = opt.delta;
    m["sigma"] = opt.sigma;
    if (opt.zeta > 0.0) m["zeta"] = opt.zeta;
    m["epsilon_certificate"] = instance.epsilon_certificate;
    m["n"] = g.n();
    m["components"] = g.component_count();
    std::ofstream mf(opt.manifest, std::ios::binary);
    if (!mf) throw grub::FileError("cannot write manifest: " + opt.manifest);
    mf << m.dump(2) << '\n';
  }
  return 0;
}

int cmd_influence(const std::string& graph_file, double rho, const std::string& out_path) {
  const grub::SimilarityGraph g = grub::read_graph_file(graph_file);
  const grub::InfluenceTable table(g, grub::build_laplacian(g), rho);

  OutStream out(out_path);
  std::ostream& os = out.get();
  os << "node,component,component_size,influence\n";
  for (int v = 0; v < g.n(); ++v) {
    const int c = g.component_of(v);
    os << v << ',' << c << ',' << g.components()[c].size() << ',' << fmt9(table.factor(v))
       << '\n';
  }
  return 0;
}

struct ComplexityOptions {
  std::string graph_file, means_file;
  double rho = 1.0, epsilon = 0.0, delta = 0.05, sigma = 1.0;
  double zeta = 0.0;
  int constant = 112;
  std::string format = "table";
  std::string out;
};

int cmd_complexity(const ComplexityOptions& opt) {
  const grub::SimilarityGraph g = grub::read_graph_file(opt.graph_file);
  const grub::Laplacian laplacian = grub::build_laplacian(g);
  const Eigen::VectorXd mu = grub::read_means_file(opt.means_file);
  if (mu.size() != g.n()) throw grub::ConfigError("means file length does not match the graph");

  const grub::ConfidenceParams params(opt.sigma, opt.delta, opt.epsilon, g.n());
  const grub::InfluenceTable influence(g, laplacian, opt.rho);
  const auto constant = opt.constant == 112 ? grub::BoundConstant::standard
                        : opt.constant == 448
                            ? grub::BoundConstant::conservative
                            : throw grub::ConfigError("--constant must be 112 or 448");
  const grub::ComplexityReport report = grub::build_report(
      mu, g, influence, params, opt.rho,
      opt.zeta > 0.0 ? std::optional<double>(opt.zeta) : std::nullopt, constant);

  OutStream out(opt.out);
  std::ostream& os = out.get();
  if (opt.format == "csv") {
    os << "arm,gap,influence,class\n";
    for (int j = 0; j < g.n(); ++j) {
      os << j << ',' << fmt9(report.split.gaps[j]) << ',' << fmt9(report.influence_factors[j])
         << ',' << grub::arm_class_name(report.split.classes[j]) << '\n';
    }
    os << "k," << report.component_count << '\n';
    os << "T," << fmt9(report.t_bound) << '\n';
    if (report.t_zeta) os << "T_zeta," << fmt9(*report.t_zeta) << '\n';
    os << "n_ratio," << fmt9(report.improvement.noncompetitive_ratio) << '\n';
    os << "w_bound," << fmt9(report.improvement.weakly_bound) << '\n';
  } else if (opt.format == "table") {
    os << "arm  gap            influence      class\n";
    for (int j = 0; j < g.n(); ++j) {
      char line[128];
      std::snprintf(line, sizeof(line), "%-4d %-14.6g %-14.6g %s\n", j, report.split.gaps[j],
                    report.influence_factors[j], grub::arm_class_name(report.split.classes[j]));
      os << line;
    }
    os << "components: " << report.component_count << '\n';
    os << "T: " << fmt9(report.t_bound) << '\n';
    if (report.t_zeta) os << "T_zeta: " << fmt9(*report.t_zeta) << '\n';
    os << "noncompetitive ratio: " << fmt9(report.improvement.noncompetitive_ratio) << '\n';
    os << "weakly bound: " << fmt9(report.improvement.weakly_bound) << '\n';
    for (const auto& arm : report.improvement.highly_arms) {
      os << "H arm " << arm.arm << ": ratio " << fmt9(arm.ratio) << ", net positive "
         << (arm.net_positive ? "yes" : "no") << '\n';
    }
  } else {
    throw grub::ConfigError("--format must be csv or table");
  }
  return 0;
}

int cmd_gamma_check(const std::string& ref_file, const std::string& other_file) {
  const grub::SimilarityGraph ref = grub::read_graph_file(ref_file);
  const grub::SimilarityGraph other = grub::read_graph_file(other_file);
  const auto result = grub::gamma_closeness(grub::build_laplacian(ref),
                                            grub::build_laplacian(other));
  if (result.compatible)
    std::cout << "gamma " << fmt9(result.gamma) << '\n';
  else
    std::cout << "incompatible\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pure exploration on bandits with graph side information"};
  app.require_subcommand(1);
  app.set_config("--config");

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run seeded experiments, emit a CSV trace");
  run_cmd->add_option("--graph", run.graph_file, "Edge-list graph file");
  run_cmd->add_option("--gen", run.gen_spec, "Generator spec, e.g. clusters:m=10,k=10,iso=1");
  run_cmd->add_option("--means", run.means_file, "Means file, one value per line");
  run_cmd->add_option("--levels", run.levels, "Per-component base means, comma separated");
  run_cmd->add_option("--mean-eps", run.mean_eps, "Smoothness target for generated means");
  run_cmd->add_option("--mean-spread", run.mean_spread, "Perturbation spread for generated means");
  run_cmd->add_option("--save-means", run.save_means, "Persist the means actually used");
  run_cmd->add_option("--policy", run.policy, "cyclic|valko|maxdiff|mintrace|mindet|jvmo");
  run_cmd->add_option("--rho", run.rho, "Regularization weight");
  run_cmd->add_option("--epsilon", run.epsilon, "Certified smoothness bound");
  run_cmd->add_option("--delta", run.delta, "Failure probability");
  run_cmd->add_option("--sigma", run.sigma, "Reward noise scale");
  run_cmd->add_option("--zeta", run.zeta, "Approximation slack (> 0 enables the zeta stop)");
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--runs", run.runs, "Number of seeded runs");
  run_cmd->add_option("--max-steps", run.max_steps, "Step cap (0: 50n)");
  run_cmd->add_option("--out", run.out, "Output CSV path (default stdout)");
  run_cmd->add_option("--manifest", run.manifest, "Write an instance manifest (JSON)");

  std::string inf_graph, inf_out;
  double inf_rho = 1.0;
  CLI::App* inf_cmd = app.add_subcommand("influence", "Per-node influence factors as CSV");
  inf_cmd->add_option("--graph", inf_graph, "Edge-list graph file")->required();
  inf_cmd->add_option("--rho", inf_rho, "Regularization weight");
  inf_cmd->add_option("--out", inf_out, "Output CSV path (default stdout)");

  ComplexityOptions cx;
  CLI::App* cx_cmd = app.add_subcommand("complexity", "Arm classes and sample-complexity bounds");
  cx_cmd->add_option("--graph", cx.graph_file, "Edge-list graph file")->required();
  cx_cmd->add_option("--means", cx.means_file, "Means file")->required();
  cx_cmd->add_option("--rho", cx.rho, "Regularization weight");
  cx_cmd->add_option("--epsilon", cx.epsilon, "Certified smoothness bound");
  cx_cmd->add_option("--delta", cx.delta, "Failure probability");
  cx_cmd->add_option("--sigma", cx.sigma, "Reward noise scale");
  cx_cmd->add_option("--zeta", cx.zeta, "Also report the zeta-adjusted bound");
  cx_cmd->add_option("--constant", cx.constant, "Leading constant, 112 or 448");
  cx_cmd->add_option("--format", cx.format, "csv|table");
  cx_cmd->add_option("--out", cx.out, "Output path (default stdout)");

  std::string gamma_ref, gamma_other;
  CLI::App* gamma_cmd = app.add_subcommand("gamma-check", "Gamma-closeness of two graphs");
  gamma_cmd->add_option("reference", gamma_ref, "Reference graph file")->required();
  gamma_cmd->add_option("other", gamma_other, "Compared graph file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (inf_cmd->parsed()) return cmd_influence(inf_graph, inf_rho, inf_out);
    if (cx_cmd->parsed()) return cmd_complexity(cx);
    if (gamma_cmd->parsed()) return cmd_gamma_check(gamma_ref, gamma_other);
  } catch (const grub::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
