#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "netpool/bias.hpp"
#include "netpool/config.hpp"
#include "netpool/error.hpp"
#include "netpool/graph.hpp"
#include "netpool/montecarlo.hpp"
#include "netpool/pooling.hpp"
#include "netpool/random_graph.hpp"

namespace netpool::cli {
namespace {

using nlohmann::json;

enum class Format { Table, Csv, Json };

const std::map<std::string, Format> kFormats{{"table", Format::Table}, {"csv", Format::Csv}, {"json", Format::Json}};

std::string sig6(double v) { return fmt::format("{:.6g}", v); }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError(flag, fmt::format("empty entry in '{}'", text));
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError(flag, fmt::format("'{}' is not a number", item));
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(flag, "expected a comma-separated list of numbers");
  return out;
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_list(line, "--x-file").at(0));
    } catch (const ConfigError&) {
      throw ConfigError("--x-file", fmt::format("{}:{}: not a number", path, line_no));
    }
  }
  if (out.empty()) throw ConfigError("--x-file", fmt::format("'{}' holds no values", path));
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Resolves the master seed: --seed, then the config, then NETPOOL_SEED.
std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value, std::optional<std::uint64_t> from_config) {
  if (flag != nullptr && flag->count() > 0) return flag_value;
  if (from_config) return *from_config;
  if (const char* env = std::getenv("NETPOOL_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ConfigError("NETPOOL_SEED", fmt::format("'{}' is not a non-negative integer", text));
    }
    return v;
  }
  return 0;
}

/// Writes to --out when given, standard output otherwise.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", out_path));
  file << text;
  file.flush();
  if (!file) throw IoError(fmt::format("write failed for '{}'", out_path));
}

struct GraphFlags {
  std::string topology;
  std::size_t n = 0;
  std::size_t d = 0;
  double mean_degree = 0.0;
  double p = 0.0;
  std::string graph_file;
  std::uint64_t seed = 0;
  CLI::Option* n_opt = nullptr;
  CLI::Option* mean_degree_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* topology_opt = nullptr;
  CLI::Option* graph_file_opt = nullptr;
};

void add_graph_flags(CLI::App* sub, GraphFlags& f, bool allow_file) {
  f.topology_opt = sub->add_option("--topology", f.topology, "star | line | ring | d_regular | complete | poisson");
  f.n_opt = sub->add_option("--n", f.n, "number of experts");
  sub->add_option("--d", f.d, "neighbors per node for d_regular (self excluded)");
  f.mean_degree_opt = sub->add_option("--mean-degree", f.mean_degree, "poisson: expected degree <d>, p = <d>/(n-1)");
  f.p_opt = sub->add_option("--p", f.p, "poisson: meeting probability");
  f.mean_degree_opt->excludes(f.p_opt);
  f.seed_opt = sub->add_option("--seed", f.seed, "poisson: graph seed (falls back to NETPOOL_SEED)");
  if (allow_file) {
    f.graph_file_opt = sub->add_option("--graph-file", f.graph_file, "edge-list file (n=<int> header, 1-based i j)");
    f.graph_file_opt->excludes(f.topology_opt);
  }
}

Graph build_graph(const GraphFlags& f) {
  if (f.graph_file_opt != nullptr && f.graph_file_opt->count() > 0) return read_edge_list(f.graph_file);
  if (f.topology_opt->count() == 0) throw ConfigError("--topology", "required (or --graph-file)");
  if (f.n_opt->count() == 0) throw ConfigError("--n", "required with --topology");
  Topology topo;
  topo.kind = parse_topology_kind(f.topology);
  topo.d = f.d;
  if (topo.kind == TopologyKind::Poisson) {
    double p = f.p;
    if (f.mean_degree_opt->count() > 0) {
      p = poisson_meeting_probability(f.mean_degree, f.n);
    } else if (f.p_opt->count() == 0) {
      throw ConfigError("--mean-degree", "poisson topology needs --mean-degree or --p");
    }
    const std::uint64_t seed = resolve_seed(f.seed_opt, f.seed, std::nullopt);
    return sample_poisson_graph({f.n, p}, seed);
  }
  return build_topology(topo, f.n);
}

struct CovFlags {
  double sigma2 = 1.0;
  double rho = 0.0;
  std::string sigmas;
  CLI::Option* sigmas_opt = nullptr;
};

void add_cov_flags(CLI::App* sub, CovFlags& f) {
  auto* s2 = sub->add_option("--sigma2", f.sigma2, "common error variance (default 1)");
  sub->add_option("--rho", f.rho, "common error correlation in [0, 1) (default 0)");
  f.sigmas_opt = sub->add_option("--sigmas", f.sigmas, "per-expert standard deviations, comma-separated");
  f.sigmas_opt->excludes(s2);
}

CovarianceSpec build_cov(const CovFlags& f, std::size_t n) {
  if (f.sigmas_opt->count() > 0) {
    auto sd = parse_list(f.sigmas, "--sigmas");
    if (sd.size() != n) {
      throw ConfigError("--sigmas", fmt::format("expected {} values, got {}", n, sd.size()));
    }
    return CovarianceSpec::heterogeneous(std::move(sd), f.rho);
  }
  return CovarianceSpec::equicorrelated(n, f.sigma2, f.rho);
}

std::string format_vector(const Eigen::VectorXd& v, bool round) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ' ';
    s += round ? sig6(v[i]) : fmt::format("{}", v[i]);
  }
  return s;
}

// ---- commands -------------------------------------------------------------

void cmd_graph(const GraphFlags& f, const std::string& out_path, std::ostream& out) {
  std::ostringstream text;
  write_edge_list(build_graph(f), text);
  emit(text.str(), out_path, out);
}

void cmd_alpha(const GraphFlags& f, Format format, const std::string& out_path, std::ostream& out) {
  const Graph g = build_graph(f);
  const AttentionVector alpha = attention_centrality(g);
  std::ostringstream text;
  switch (format) {
    case Format::Csv:
      write_attention_csv(alpha, text);
      break;
    case Format::Json: {
      json rows = json::array();
      for (Eigen::Index i = 0; i < alpha.alphas.size(); ++i) {
        rows.push_back({{"node", i + 1}, {"alpha", alpha.alphas[i]}});
      }
      text << json{{"alpha", rows}, {"sum", alpha.alphas.sum()}}.dump(2) << '\n';
      break;
    }
    case Format::Table:
      text << fmt::format("{:>6}  {}\n", "node", "alpha");
      for (Eigen::Index i = 0; i < alpha.alphas.size(); ++i) {
        text << fmt::format("{:>6}  {}\n", i + 1, sig6(alpha.alphas[i]));
      }
      break;
  }
  emit(text.str(), out_path, out);
}

struct PoolFlags {
  std::string x;
  std::string x_file;
  std::string rules;
  double theta = 0.0;
  CLI::Option* x_opt = nullptr;
  CLI::Option* theta_opt = nullptr;
};

void cmd_pool(const GraphFlags& gf, const CovFlags& cf, const PoolFlags& pf, Format format,
              const std::string& out_path, std::ostream& out) {
  const Graph g = build_graph(gf);
  const std::size_t n = g.size();
  const std::vector<double> xs = pf.x_opt->count() > 0 ? parse_list(pf.x, "--x") : read_values_file(pf.x_file);
  if (xs.size() != n) {
    throw ConfigError(pf.x_opt->count() > 0 ? "--x" : "--x-file",
                      fmt::format("expected {} forecasts for n={}, got {}", n, n, xs.size()));
  }
  const Eigen::VectorXd x = to_vector(xs);
  const CovarianceSpec cov = build_cov(cf, n);
  RuleAssignment rules = RuleAssignment::all_simple(n);
  if (!pf.rules.empty()) {
    try {
      rules = RuleAssignment::parse_pattern(pf.rules, n);
    } catch (const Error& e) {
      throw ConfigError("--rules", e.what());
    }
  }

  const Eigen::VectorXd combined = combined_forecasts(g, x, cov, rules);
  const double pooled_combined = pool_dm(combined, cov, rules.dm);
  const double pooled_direct = pool_dm(x, cov, rules.dm);
  const double bias = pooled_combined - pooled_direct;

  std::vector<std::pair<std::string, double>> extra;
  if (pf.theta_opt->count() > 0) {
    const Eigen::VectorXd errors = x.array() - pf.theta;
    extra.emplace_back("theta", pf.theta);
    extra.emplace_back("dm_error_combined", pooled_combined - pf.theta);
    extra.emplace_back("dm_error_direct", pooled_direct - pf.theta);
    extra.emplace_back("attention_bias", bias_from_attention(attention_centrality(g), errors));
  }

  std::ostringstream text;
  switch (format) {
    case Format::Table:
      text << fmt::format("{:<20}{}\n", "rules", rules.to_string());
      text << fmt::format("{:<20}{}\n", "forecasts", format_vector(x, true));
      text << fmt::format("{:<20}{}\n", "combined", format_vector(combined, true));
      text << fmt::format("{:<20}{}\n", "pooled_combined", sig6(pooled_combined));
      text << fmt::format("{:<20}{}\n", "pooled_direct", sig6(pooled_direct));
      text << fmt::format("{:<20}{}\n", "network_bias", sig6(bias));
      for (const auto& [k, v] : extra) text << fmt::format("{:<20}{}\n", k, sig6(v));
      break;
    case Format::Csv:
      text << "quantity,value\n";
      for (Eigen::Index i = 0; i < combined.size(); ++i) {
        text << fmt::format("combined_{},{}\n", i + 1, combined[i]);
      }
      text << fmt::format("pooled_combined,{}\npooled_direct,{}\nnetwork_bias,{}\n", pooled_combined,
                          pooled_direct, bias);
      for (const auto& [k, v] : extra) text << fmt::format("{},{}\n", k, v);
      break;
    case Format::Json: {
      json doc{{"rules", rules.to_string()},
               {"forecasts", xs},
               {"combined", std::vector<double>(combined.data(), combined.data() + combined.size())},
               {"pooled_combined", pooled_combined},
               {"pooled_direct", pooled_direct},
               {"network_bias", bias}};
      for (const auto& [k, v] : extra) doc[k] = v;
      text << doc.dump(2) << '\n';
      break;
    }
  }
  emit(text.str(), out_path, out);
}

struct AnalyticFlags {
  std::size_t n = 0;
  double sigma2 = 1.0;
  double rho = 0.0;
  double mean_degree = 0.0;
  double x = 0.0;
  double p = 0.0;
};

void emit_scalar(const std::string& name, double value, Format format, const std::string& out_path,
                 std::ostream& out) {
  std::string text;
  switch (format) {
    case Format::Table:
      text = sig6(value) + "\n";
      break;
    case Format::Csv:
      text = fmt::format("quantity,value\n{},{}\n", name, value);
      break;
    case Format::Json:
      text = json{{"quantity", name}, {"value", value}}.dump(2) + "\n";
      break;
  }
  emit(text, out_path, out);
}

struct ExperimentFlags {
  std::string config_path;
  std::string topology;
  std::string n_values;
  std::size_t d = 0;
  double mean_degree = 0.0;
  std::size_t replicates = 0;
  std::size_t graph_replicates = 0;
  double theta = 0.0;
  double sigma2 = 1.0;
  double rho = 0.0;
  std::string rules;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::map<std::string, CLI::Option*> opts;
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f) {
  f.opts["config"] = sub->add_option("--config", f.config_path, "JSON experiment config");
  f.opts["topology"] = sub->add_option("--topology", f.topology, "overrides topology.kind");
  f.opts["n"] = sub->add_option("--n", f.n_values, "overrides n_values (comma-separated)");
  f.opts["d"] = sub->add_option("--d", f.d, "overrides topology.d");
  f.opts["mean_degree"] = sub->add_option("--mean-degree", f.mean_degree, "overrides topology.mean_degree");
  f.opts["replicates"] = sub->add_option("--replicates", f.replicates, "overrides replicates");
  f.opts["graph_replicates"] = sub->add_option("--graph-replicates", f.graph_replicates,
                                               "overrides graph_replicates");
  f.opts["theta"] = sub->add_option("--theta", f.theta, "overrides theta");
  f.opts["sigma2"] = sub->add_option("--sigma2", f.sigma2, "overrides cov.sigma2 (equicorrelated)");
  f.opts["rho"] = sub->add_option("--rho", f.rho, "overrides cov.rho (equicorrelated)");
  f.opts["rules"] = sub->add_option("--rules", f.rules, "overrides rules, e.g. S|S or S|SSB");
  f.opts["seed"] = sub->add_option("--seed", f.seed, "overrides master_seed");
  f.opts["threads"] = sub->add_option("--threads", f.threads, "worker cap; results do not depend on it")
                          ->check(CLI::PositiveNumber);
}

bool given(const ExperimentFlags& f, const std::string& key) { return f.opts.at(key)->count() > 0; }

ExperimentConfig build_experiment(const ExperimentFlags& f) {
  json doc = json::object();
  bool has_config_seed = false;
  if (given(f, "config")) {
    std::ifstream in(f.config_path);
    if (!in) throw IoError(fmt::format("cannot open config '{}'", f.config_path));
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("--config", fmt::format("{}: malformed JSON ({})", f.config_path, e.what()));
    }
    if (!doc.is_object()) throw ConfigError("--config", "config must be a JSON object");
    doc = nest_dotted_keys(doc);
    has_config_seed = doc.contains("master_seed");
  }
  if (given(f, "topology")) doc["topology"]["kind"] = f.topology;
  if (given(f, "d")) doc["topology"]["d"] = f.d;
  if (given(f, "mean_degree")) doc["topology"]["mean_degree"] = f.mean_degree;
  if (given(f, "n")) {
    json values = json::array();
    for (double v : parse_list(f.n_values, "--n")) {
      if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw ConfigError("--n", "every n must be a positive integer");
      }
      values.push_back(static_cast<std::size_t>(v));
    }
    doc["n_values"] = values;
  }
  if (given(f, "replicates")) doc["replicates"] = f.replicates;
  if (given(f, "graph_replicates")) doc["graph_replicates"] = f.graph_replicates;
  if (given(f, "theta")) doc["theta"] = f.theta;
  if (given(f, "sigma2") || given(f, "rho")) {
    if (doc.contains("cov") && doc["cov"].value("kind", "equi") != "equi") {
      throw ConfigError("cov.kind", "--sigma2/--rho apply only to cov.kind=equi");
    }
    doc["cov"]["kind"] = "equi";
    if (given(f, "sigma2")) doc["cov"]["sigma2"] = f.sigma2;
    if (given(f, "rho")) doc["cov"]["rho"] = f.rho;
  }
  if (given(f, "rules")) doc["rules"] = f.rules;
  ExperimentConfig config = parse_config(doc);
  config.master_seed = resolve_seed(f.opts.at("seed"), f.seed,
                                    has_config_seed ? std::optional(config.master_seed) : std::nullopt);
  return config;
}

std::string render_sweep(const SweepResult& result, Format format) {
  std::ostringstream text;
  switch (format) {
    case Format::Csv:
      write_results(result, text);
      break;
    case Format::Json:
      text << to_json(result).dump(2) << '\n';
      break;
    case Format::Table:
      text << fmt::format("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10}\n", "n", "mean_bias", "var_bias",
                          "se_mean", "se_var", "analytic_var", "reps");
      for (const SweepRow& r : result.rows) {
        text << fmt::format("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10}\n", r.n, sig6(r.mean_bias),
                            sig6(r.var_bias), sig6(r.se_mean), sig6(r.se_var), sig6(r.analytic_var),
                            r.replicates_used);
      }
      break;
  }
  return text.str();
}

void cmd_experiment(const ExperimentFlags& f, bool random, Format format, const std::string& out_path,
                    std::ostream& out) {
  const ExperimentConfig config = build_experiment(f);
  if (config.topology.is_random() != random) {
    throw ConfigError("topology.kind", random ? "sweep runs poisson topologies; use simulate for fixed graphs"
                                              : "simulate runs fixed topologies; use sweep for poisson");
  }
  const RunOptions options{f.threads};
  const SweepResult result = random ? run_random_graph(config, options) : run_fixed_graph(config, options);
  emit(render_sweep(result, format), out_path, out);
}

bool is_usage_error(const Error& e) { return dynamic_cast<const NumericError*>(&e) == nullptr; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"netpool: network bias in pooled expert forecasts", "netpool"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);

  std::string format_name;
  std::string out_path;
  auto add_output = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--out", out_path, "write output to this path instead of standard output");
    if (with_format) {
      sub->add_option("--format", format_name, "table | csv | json (default: table, csv with --out)")
          ->check(CLI::IsMember({"table", "csv", "json"}));
    }
  };

  GraphFlags graph_flags;
  auto* graph_cmd = app.add_subcommand("graph", "emit the edge list of a topology");
  add_graph_flags(graph_cmd, graph_flags, false);
  add_output(graph_cmd, false);

  GraphFlags alpha_flags;
  auto* alpha_cmd = app.add_subcommand("alpha", "attention centrality of every expert");
  add_graph_flags(alpha_cmd, alpha_flags, true);
  add_output(alpha_cmd, true);

  GraphFlags pool_graph;
  CovFlags pool_cov;
  PoolFlags pool_flags;
  auto* pool_cmd = app.add_subcommand("pool", "one round of pooling and the resulting network bias");
  add_graph_flags(pool_cmd, pool_graph, true);
  add_cov_flags(pool_cmd, pool_cov);
  pool_flags.x_opt = pool_cmd->add_option("--x", pool_flags.x, "forecasts, comma-separated");
  auto* x_file = pool_cmd->add_option("--x-file", pool_flags.x_file, "file with one forecast per line");
  pool_flags.x_opt->excludes(x_file);
  pool_cmd->add_option("--rules", pool_flags.rules, "rule assignment, e.g. S|SSB (default all S)");
  pool_flags.theta_opt = pool_cmd->add_option("--theta", pool_flags.theta, "truth, to report errors");
  add_output(pool_cmd, true);

  AnalyticFlags af;
  auto* analytic_cmd = app.add_subcommand("analytic", "closed-form quantities");
  analytic_cmd->require_subcommand(1, 1);
  add_output(analytic_cmd, true);
  std::string analytic_name;
  std::function<double()> analytic_fn;
  auto add_quantity = [&](const std::string& name, const std::string& help,
                          std::initializer_list<std::string> flags, std::function<double()> fn) {
    auto* q = analytic_cmd->add_subcommand(name, help);
    for (const auto& flag : flags) {
      if (flag == "n") q->add_option("--n", af.n, "number of experts")->required();
      if (flag == "sigma2") q->add_option("--sigma2", af.sigma2, "error variance (default 1)");
      if (flag == "rho") q->add_option("--rho", af.rho, "error correlation (default 0)");
      if (flag == "mean_degree") q->add_option("--mean-degree", af.mean_degree, "expected degree <d>")->required();
      if (flag == "x") q->add_option("--x", af.x, "argument")->required();
      if (flag == "p") q->add_option("--p", af.p, "meeting probability")->required();
    }
    add_output(q, true);
    q->callback([&analytic_name, &analytic_fn, name, fn] {
      analytic_name = name;
      analytic_fn = fn;
    });
  };
  add_quantity("star-var", "bias variance of a star", {"n", "sigma2", "rho"},
               [&] { return star_bias_variance(af.n, af.sigma2, af.rho); });
  add_quantity("line-var", "bias variance of a line", {"n", "sigma2", "rho"},
               [&] { return line_bias_variance(af.n, af.sigma2, af.rho); });
  add_quantity("dm-precision", "decision-maker posterior precision", {"n", "sigma2", "rho"},
               [&] { return dm_posterior_precision(af.n, af.sigma2, af.rho); });
  add_quantity("ei", "exponential integral Ei(x)", {"x"}, [&] { return exponential_integral(af.x); });
  add_quantity("k", "K-factor E[1/d | d > 0] for Poisson degrees", {"mean_degree"},
               [&] { return k_factor(af.mean_degree); });
  add_quantity("k-one-plus-d", "K(<d>) (1 + <d>)", {"mean_degree"}, [&] { return k_times_one_plus_d(af.mean_degree); });
  add_quantity("recip-degree", "E[1/d_j] for a random neighbor", {"mean_degree"},
               [&] { return expected_recip_neighbor_degree(af.mean_degree); });
  add_quantity("recip-degree-sq", "E[1/d_j^2] for a random neighbor", {"mean_degree"},
               [&] { return expected_recip_neighbor_degree_sq(af.mean_degree); });
  add_quantity("choose2", "E[C(d,2)] for Binomial(n-1, p) degrees", {"n", "p"},
               [&] { return expected_choose2(af.n, af.p); });
  add_quantity("poisson-var", "expected bias variance over Poisson graphs", {"n", "sigma2", "mean_degree"},
               [&] { return expected_bias_variance_poisson({af.mean_degree, af.sigma2, af.n}); });

  ExperimentFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo network bias on fixed topologies");
  add_experiment_flags(sim_cmd, sim_flags);
  add_output(sim_cmd, true);

  ExperimentFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo network bias over Poisson random graphs");
  add_experiment_flags(sweep_cmd, sweep_flags);
  add_output(sweep_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Format format =
      !format_name.empty() ? kFormats.at(format_name) : (out_path.empty() ? Format::Table : Format::Csv);

  try {
    if (graph_cmd->parsed()) {
      cmd_graph(graph_flags, out_path, out);
    } else if (alpha_cmd->parsed()) {
      cmd_alpha(alpha_flags, format, out_path, out);
    } else if (pool_cmd->parsed()) {
      if (pool_flags.x_opt->count() == 0 && x_file->count() == 0) {
        throw ConfigError("--x", "forecasts required (--x or --x-file)");
      }
      cmd_pool(pool_graph, pool_cov, pool_flags, format, out_path, out);
    } else if (analytic_cmd->parsed()) {
      emit_scalar(analytic_name, analytic_fn(), format, out_path, out);
    } else if (sim_cmd->parsed()) {
      cmd_experiment(sim_flags, false, format, out_path, out);
    } else if (sweep_cmd->parsed()) {
      cmd_experiment(sweep_flags, true, format, out_path, out);
    }
  } catch (const Error& e) {
    err << "netpool: " << e.what() << '\n';
    return is_usage_error(e) ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "netpool: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace netpool::cli
