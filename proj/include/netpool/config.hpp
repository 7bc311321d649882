#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "netpool/montecarlo.hpp"

namespace netpool {

/// Reads an experiment config. Keys may be nested ({"cov": {"kind": ...}})
/// or dotted ("cov.kind"). Unknown keys and bad values raise ConfigError
/// with the dotted key name.
///
///   theta, cov.kind {equi, hetero, general}, cov.sigma2, cov.rho,
///   cov.sigmas, cov.matrix, topology.kind, topology.mean_degree,
///   topology.d, n_values, replicates, graph_replicates, rules, master_seed
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Rewrites dotted keys into nested objects without validating values.
nlohmann::json nest_dotted_keys(const nlohmann::json& doc);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const SweepResult& result);

}  // namespace netpool
