#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "netpool/covariance.hpp"
#include "netpool/graph.hpp"

namespace netpool {

enum class TopologyKind { Star, Line, Ring, DRegular, Complete, Poisson };

struct Topology {
  TopologyKind kind = TopologyKind::Star;
  std::size_t d = 0;         // DRegular only
  double mean_degree = 0.0;  // Poisson only

  bool is_random() const noexcept { return kind == TopologyKind::Poisson; }
};

std::string to_string(TopologyKind kind);
TopologyKind parse_topology_kind(const std::string& name);

/// Builds a deterministic topology on n nodes. Throws for Poisson.
Graph build_topology(const Topology& topology, std::size_t n);

/// Meeting probability <d>/(n-1) of a Poisson topology at size n; throws
/// ConfigError when it leaves [0, 1].
double poisson_meeting_probability(double mean_degree, std::size_t n);

struct ExperimentConfig {
  double theta = 0.0;
  CovarianceSpec cov = CovarianceSpec::equicorrelated(1, 1.0, 0.0);
  Topology topology;
  std::vector<std::size_t> n_values;
  std::size_t replicates = 500;
  std::size_t graph_replicates = 200;
  std::string rules = "S|S";
  std::uint64_t master_seed = 0;
};

/// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& config);

struct SweepRow {
  std::size_t n = 0;
  double mean_bias = 0.0;
  double var_bias = 0.0;
  double se_mean = 0.0;
  double se_var = 0.0;
  double analytic_var = 0.0;
  std::size_t replicates_used = 0;
  std::uint64_t seed_base = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

struct RunOptions {
  /// Worker cap. Results do not depend on it.
  unsigned threads = 1;
};

// Seed derivation. Every (n, graph, replicate) unit has its own stream.
std::uint64_t seed_base(std::uint64_t master_seed, std::size_t n);
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t n, std::size_t graph, std::size_t replicate);
std::uint64_t graph_seed(std::uint64_t master_seed, std::size_t n, std::size_t graph);

/// Order-fixed pairwise summation; the result depends only on the values
/// and their order.
double pairwise_sum(std::span<const double> values);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, denominator N - 1
};
SampleMoments sample_moments(std::span<const double> values);

/// Network bias across error draws on one graph per n.
SweepResult run_fixed_graph(const ExperimentConfig& config, const RunOptions& options = {});

/// Network bias across graph_replicates Poisson graphs times replicates
/// draws per graph, pooled over both levels.
SweepResult run_random_graph(const ExperimentConfig& config, const RunOptions& options = {});

/// Dispatches on the topology.
SweepResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

inline constexpr const char* kSweepCsvHeader =
    "n,mean_bias,var_bias,se_mean,se_var,analytic_var,replicates_used,seed_base";

void write_results(const SweepResult& result, std::ostream& out);
void write_results(const SweepResult& result, const std::filesystem::path& path);
SweepResult read_results(std::istream& in);

}  // namespace netpool
