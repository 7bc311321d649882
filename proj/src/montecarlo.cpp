#include "netpool/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include <fmt/core.h>

#include "netpool/bias.hpp"
#include "netpool/error.hpp"
#include "netpool/pooling.hpp"
#include "netpool/random_graph.hpp"
#include "netpool/rng.hpp"

namespace netpool {
namespace {

constexpr std::uint64_t kGraphStreamTag = std::numeric_limits<std::uint64_t>::max();
constexpr std::size_t kPairwiseBlock = 32;

// Runs fn(begin, end) over [0, count) split into contiguous chunks, one per
// worker. Work units write to disjoint slots, so the split cannot change
// results.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double draw_bias(const LinearPoolingPlan& plan, const ErrorSampler& sampler, double theta, std::uint64_t seed,
                 Eigen::VectorXd& scratch) {
  rng::CounterStream stream(seed);
  sampler.sample(stream, scratch);
  scratch.array() += theta;
  return plan.network_bias(scratch);
}

SweepRow summarize(std::size_t n, std::span<const double> biases, double analytic_var, std::uint64_t base) {
  SweepRow row;
  row.n = n;
  row.replicates_used = biases.size();
  row.seed_base = base;
  row.analytic_var = analytic_var;
  const SampleMoments m = sample_moments(biases);
  row.mean_bias = m.mean;
  row.var_bias = m.variance;
  if (biases.size() >= 2) {
    const double count = static_cast<double>(biases.size());
    row.se_mean = std::sqrt(m.variance / count);
    row.se_var = analytic_var * std::sqrt(2.0 / (count - 1.0));
  } else {
    row.se_mean = std::numeric_limits<double>::quiet_NaN();
    row.se_var = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_field(const std::string& text, std::size_t line_no, const char* column) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (text == "nan") return std::numeric_limits<T>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<T>::infinity();
    if (text == "-inf") return -std::numeric_limits<T>::infinity();
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw IoError(fmt::format("line {}: cannot parse column '{}' from '{}'", line_no, column, text));
  }
  return value;
}

}  // namespace

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Star:
      return "star";
    case TopologyKind::Line:
      return "line";
    case TopologyKind::Ring:
      return "ring";
    case TopologyKind::DRegular:
      return "d_regular";
    case TopologyKind::Complete:
      return "complete";
    case TopologyKind::Poisson:
      return "poisson";
  }
  return "unknown";
}

TopologyKind parse_topology_kind(const std::string& name) {
  if (name == "star") return TopologyKind::Star;
  if (name == "line") return TopologyKind::Line;
  if (name == "ring") return TopologyKind::Ring;
  if (name == "d_regular" || name == "d-regular") return TopologyKind::DRegular;
  if (name == "complete") return TopologyKind::Complete;
  if (name == "poisson") return TopologyKind::Poisson;
  throw ConfigError("topology.kind",
                    fmt::format("unknown topology '{}' (star, line, ring, d_regular, complete, poisson)", name));
}

Graph build_topology(const Topology& topology, std::size_t n) {
  switch (topology.kind) {
    case TopologyKind::Star:
      return make_star(n);
    case TopologyKind::Line:
      return make_line(n);
    case TopologyKind::Ring:
      return make_ring(n);
    case TopologyKind::DRegular:
      return make_d_regular(n, topology.d);
    case TopologyKind::Complete:
      return make_complete(n);
    case TopologyKind::Poisson:
      break;
  }
  throw ConfigError("topology.kind", "poisson topology has no fixed graph; sample it instead");
}

double poisson_meeting_probability(double mean_degree, std::size_t n) {
  if (!(mean_degree > 0.0) || !std::isfinite(mean_degree)) {
    throw ConfigError("topology.mean_degree", fmt::format("must be positive, got {}", mean_degree));
  }
  if (n < 2) {
    throw ConfigError("n_values", fmt::format("poisson topology needs n >= 2, got {}", n));
  }
  const double p = mean_degree / static_cast<double>(n - 1);
  if (p > 1.0) {
    throw ConfigError("n_values", fmt::format("p = {}/(n-1) = {} exceeds 1 at n={}; use n >= {}", mean_degree, p,
                                              n, static_cast<std::size_t>(std::ceil(mean_degree)) + 1));
  }
  return p;
}

void validate(const ExperimentConfig& config) {
  if (config.n_values.empty()) throw ConfigError("n_values", "must list at least one n");
  if (config.replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (!std::isfinite(config.theta)) throw ConfigError("theta", "must be finite");
  const bool equi = std::holds_alternative<Equicorrelated>(config.cov.variant());
  for (std::size_t n : config.n_values) {
    if (n < 1) throw ConfigError("n_values", "every n must be >= 1");
    if (!equi && n != config.cov.dimension()) {
      throw ConfigError("n_values", fmt::format("n={} does not match the {}-dimensional covariance; only "
                                                "cov.kind=equi can follow an n sweep",
                                                n, config.cov.dimension()));
    }
    try {
      (void)RuleAssignment::parse_pattern(config.rules, n);
    } catch (const Error& e) {
      throw ConfigError("rules", e.what());
    }
    if (config.topology.is_random()) {
      (void)poisson_meeting_probability(config.topology.mean_degree, n);
    } else {
      try {
        (void)build_topology(config.topology, n);
      } catch (const InvalidSize& e) {
        throw ConfigError(config.topology.kind == TopologyKind::DRegular ? "topology.d" : "n_values", e.what());
      }
    }
  }
  if (config.topology.is_random()) {
    if (config.graph_replicates < 1) throw ConfigError("graph_replicates", "must be >= 1");
    if (!equi) throw ConfigError("cov.kind", "poisson sweeps require cov.kind=equi");
  }
}

std::uint64_t seed_base(std::uint64_t master_seed, std::size_t n) {
  return rng::derive_seed({master_seed, static_cast<std::uint64_t>(n)});
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t n, std::size_t graph, std::size_t replicate) {
  return rng::derive_seed({master_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(graph),
                           static_cast<std::uint64_t>(replicate)});
}

std::uint64_t graph_seed(std::uint64_t master_seed, std::size_t n, std::size_t graph) {
  return rng::derive_seed(
      {master_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(graph), kGraphStreamTag});
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  if (values.empty()) return m;
  const double count = static_cast<double>(values.size());
  m.mean = pairwise_sum(values) / count;
  if (values.size() < 2) return m;
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [&](double v) { return (v - m.mean) * (v - m.mean); });
  m.variance = pairwise_sum(sq) / (count - 1.0);
  return m;
}

SweepResult run_fixed_graph(const ExperimentConfig& config, const RunOptions& options) {
  if (config.topology.is_random()) {
    throw ConfigError("topology.kind", "run_fixed_graph requires a deterministic topology");
  }
  validate(config);
  SweepResult result;
  for (std::size_t n : config.n_values) {
    const CovarianceSpec cov = config.cov.resized(n);
    const Graph g = build_topology(config.topology, n);
    const RuleAssignment rules = RuleAssignment::parse_pattern(config.rules, n);
    const LinearPoolingPlan plan(g, cov, rules);
    const ErrorSampler sampler(cov);

    std::vector<double> biases(config.replicates);
    parallel_for(config.replicates, options.threads, [&](std::size_t begin, std::size_t end) {
      Eigen::VectorXd scratch(static_cast<Eigen::Index>(n));
      for (std::size_t r = begin; r < end; ++r) {
        biases[r] = draw_bias(plan, sampler, config.theta, replicate_seed(config.master_seed, n, 0, r), scratch);
      }
    });

    double analytic = 0.0;
    if (const auto* e = std::get_if<Equicorrelated>(&cov.variant())) {
      analytic = bias_variance_from_alpha(attention_centrality(g), e->sigma2, e->rho);
    } else {
      const Eigen::VectorXd& c = plan.bias_coefficients();
      analytic = c.dot(covariance_matrix(cov) * c);
    }
    result.rows.push_back(summarize(n, biases, analytic, seed_base(config.master_seed, n)));
  }
  return result;
}

SweepResult run_random_graph(const ExperimentConfig& config, const RunOptions& options) {
  if (!config.topology.is_random()) {
    throw ConfigError("topology.kind", "run_random_graph requires topology.kind=poisson");
  }
  validate(config);
  const auto& equi = std::get<Equicorrelated>(config.cov.variant());
  SweepResult result;
  for (std::size_t n : config.n_values) {
    const double p = poisson_meeting_probability(config.topology.mean_degree, n);
    const CovarianceSpec cov = config.cov.resized(n);
    const RuleAssignment rules = RuleAssignment::parse_pattern(config.rules, n);
    const ErrorSampler sampler(cov);
    const std::size_t per_graph = config.replicates;

    std::vector<double> biases(config.graph_replicates * per_graph);
    parallel_for(config.graph_replicates, options.threads, [&](std::size_t begin, std::size_t end) {
      Eigen::VectorXd scratch(static_cast<Eigen::Index>(n));
      for (std::size_t gi = begin; gi < end; ++gi) {
        const Graph g = sample_poisson_graph({n, p}, graph_seed(config.master_seed, n, gi));
        const LinearPoolingPlan plan(g, cov, rules);
        for (std::size_t r = 0; r < per_graph; ++r) {
          biases[gi * per_graph + r] =
              draw_bias(plan, sampler, config.theta, replicate_seed(config.master_seed, n, gi, r), scratch);
        }
      }
    });

    const double analytic = expected_bias_variance_poisson({config.topology.mean_degree, equi.sigma2, n});
    result.rows.push_back(summarize(n, biases, analytic, seed_base(config.master_seed, n)));
  }
  return result;
}

SweepResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  return config.topology.is_random() ? run_random_graph(config, options) : run_fixed_graph(config, options);
}

void write_results(const SweepResult& result, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : result.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", row.n, row.mean_bias, row.var_bias, row.se_mean, row.se_var,
                       row.analytic_var, row.replicates_used, row.seed_base);
  }
}

void write_results(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  write_results(result, out);
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

SweepResult read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) {
    throw IoError(fmt::format("unexpected header '{}', expected '{}'", line, kSweepCsvHeader));
  }
  SweepResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 8) {
      throw IoError(fmt::format("line {}: expected 8 columns, got {}", line_no, f.size()));
    }
    SweepRow row;
    row.n = parse_field<std::size_t>(f[0], line_no, "n");
    row.mean_bias = parse_field<double>(f[1], line_no, "mean_bias");
    row.var_bias = parse_field<double>(f[2], line_no, "var_bias");
    row.se_mean = parse_field<double>(f[3], line_no, "se_mean");
    row.se_var = parse_field<double>(f[4], line_no, "se_var");
    row.analytic_var = parse_field<double>(f[5], line_no, "analytic_var");
    row.replicates_used = parse_field<std::size_t>(f[6], line_no, "replicates_used");
    row.seed_base = parse_field<std::uint64_t>(f[7], line_no, "seed_base");
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace netpool
