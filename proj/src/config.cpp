#include "netpool/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include <fmt/core.h>

#include "netpool/error.hpp"

namespace netpool {
namespace {

using nlohmann::json;

// Folds dotted keys ("cov.kind") into nested objects.
json unflatten_dotted(const json& doc) {
  json out = json::object();
  for (const auto& [key, value] : doc.items()) {
    json* node = &out;
    std::string_view rest = key;
    std::string prefix;
    while (true) {
      const auto dot = rest.find('.');
      const std::string part(rest.substr(0, dot));
      prefix += prefix.empty() ? part : "." + part;
      if (dot == std::string_view::npos) {
        if (node->contains(part)) throw ConfigError(prefix, "key given twice");
        (*node)[part] = value.is_object() ? unflatten_dotted(value) : value;
        break;
      }
      json& child = (*node)[part];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) throw ConfigError(prefix, "expected an object");
      node = &child;
      rest = rest.substr(dot + 1);
    }
  }
  return out;
}

void reject_unknown(const json& obj, std::string_view scope, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError(scope.empty() ? key : fmt::format("{}.{}", scope, key), "unknown key");
    }
  }
}

template <class T>
T get_as(const json& obj, const char* name, const std::string& key) {
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, fmt::format("invalid value ({})", e.what()));
  }
}

double get_number(const json& obj, const char* name, const std::string& key) {
  const json& v = obj.at(name);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& obj, const char* name, const std::string& key) {
  const json& v = obj.at(name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

CovarianceSpec parse_cov(const json& cov, std::size_t first_n) {
  reject_unknown(cov, "cov", {"kind", "sigma2", "rho", "sigmas", "matrix"});
  const std::string kind = cov.contains("kind") ? get_as<std::string>(cov, "kind", "cov.kind") : "equi";
  const double rho = cov.contains("rho") ? get_number(cov, "rho", "cov.rho") : 0.0;
  try {
    if (kind == "equi") {
      const double sigma2 = cov.contains("sigma2") ? get_number(cov, "sigma2", "cov.sigma2") : 1.0;
      return CovarianceSpec::equicorrelated(first_n, sigma2, rho);
    }
    if (kind == "hetero") {
      if (!cov.contains("sigmas")) throw ConfigError("cov.sigmas", "required for cov.kind=hetero");
      return CovarianceSpec::heterogeneous(get_as<std::vector<double>>(cov, "sigmas", "cov.sigmas"), rho);
    }
    if (kind == "general") {
      if (!cov.contains("matrix")) throw ConfigError("cov.matrix", "required for cov.kind=general");
      const auto rows = get_as<std::vector<std::vector<double>>>(cov, "matrix", "cov.matrix");
      Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw ConfigError("cov.matrix", "matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) {
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
      }
      return CovarianceSpec::general(std::move(m));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError("cov.rho", e.what());
  } catch (const Error& e) {
    throw ConfigError(kind == "general" ? "cov.matrix" : (kind == "hetero" ? "cov.sigmas" : "cov.sigma2"),
                      e.what());
  }
  throw ConfigError("cov.kind", fmt::format("unknown kind '{}' (equi, hetero, general)", kind));
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& raw) {
  if (!raw.is_object()) throw ConfigError("", "config must be a JSON object");
  const json doc = unflatten_dotted(raw);
  reject_unknown(doc, "", {"theta", "cov", "topology", "n_values", "replicates", "graph_replicates", "rules",
                           "master_seed"});
  ExperimentConfig config;
  if (doc.contains("theta")) config.theta = get_number(doc, "theta", "theta");

  if (!doc.contains("n_values")) throw ConfigError("n_values", "required");
  const json& nv = doc.at("n_values");
  if (!nv.is_array() || nv.empty()) throw ConfigError("n_values", "expected a non-empty array of integers");
  for (const json& v : nv) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError("n_values", "every entry must be an integer >= 1");
    }
    config.n_values.push_back(v.get<std::size_t>());
  }

  if (doc.contains("cov")) {
    if (!doc.at("cov").is_object()) throw ConfigError("cov", "expected an object");
    config.cov = parse_cov(doc.at("cov"), config.n_values.front());
  } else {
    config.cov = CovarianceSpec::equicorrelated(config.n_values.front(), 1.0, 0.0);
  }

  if (!doc.contains("topology")) throw ConfigError("topology.kind", "required");
  const json& topo = doc.at("topology");
  if (!topo.is_object()) throw ConfigError("topology", "expected an object");
  reject_unknown(topo, "topology", {"kind", "mean_degree", "d"});
  if (!topo.contains("kind")) throw ConfigError("topology.kind", "required");
  config.topology.kind = parse_topology_kind(get_as<std::string>(topo, "kind", "topology.kind"));
  if (config.topology.kind == TopologyKind::Poisson) {
    if (!topo.contains("mean_degree")) throw ConfigError("topology.mean_degree", "required for poisson");
    config.topology.mean_degree = get_number(topo, "mean_degree", "topology.mean_degree");
  }
  if (config.topology.kind == TopologyKind::DRegular) {
    if (!topo.contains("d")) throw ConfigError("topology.d", "required for d_regular");
    config.topology.d = get_count(topo, "d", "topology.d");
  }

  if (doc.contains("replicates")) config.replicates = get_count(doc, "replicates", "replicates");
  if (doc.contains("graph_replicates")) {
    config.graph_replicates = get_count(doc, "graph_replicates", "graph_replicates");
  }
  if (doc.contains("rules")) config.rules = get_as<std::string>(doc, "rules", "rules");
  if (doc.contains("master_seed")) {
    const json& s = doc.at("master_seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0)) {
      throw ConfigError("master_seed", "expected a non-negative integer");
    }
    config.master_seed = s.get<std::uint64_t>();
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("{}: malformed JSON ({})", path.string(), e.what()));
  }
  return parse_config(doc);
}

nlohmann::json to_json(const ExperimentConfig& config) {
  json cov;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Equicorrelated>) {
          cov = {{"kind", "equi"}, {"sigma2", v.sigma2}, {"rho", v.rho}};
        } else if constexpr (std::is_same_v<T, Heterogeneous>) {
          cov = {{"kind", "hetero"}, {"sigmas", v.sigmas}, {"rho", v.rho}};
        } else {
          json rows = json::array();
          for (Eigen::Index i = 0; i < v.sigma.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < v.sigma.cols(); ++j) row.push_back(v.sigma(i, j));
            rows.push_back(row);
          }
          cov = {{"kind", "general"}, {"matrix", rows}};
        }
      },
      config.cov.variant());
  json topo = {{"kind", to_string(config.topology.kind)}};
  if (config.topology.kind == TopologyKind::Poisson) topo["mean_degree"] = config.topology.mean_degree;
  if (config.topology.kind == TopologyKind::DRegular) topo["d"] = config.topology.d;
  return {{"theta", config.theta},
          {"cov", cov},
          {"topology", topo},
          {"n_values", config.n_values},
          {"replicates", config.replicates},
          {"graph_replicates", config.graph_replicates},
          {"rules", config.rules},
          {"master_seed", config.master_seed}};
}

nlohmann::json to_json(const SweepResult& result) {
  json rows = json::array();
  for (const SweepRow& r : result.rows) {
    rows.push_back({{"n", r.n},
                    {"mean_bias", r.mean_bias},
                    {"var_bias", r.var_bias},
                    {"se_mean", r.se_mean},
                    {"se_var", r.se_var},
                    {"analytic_var", r.analytic_var},
                    {"replicates_used", r.replicates_used},
                    {"seed_base", r.seed_base}});
  }
  return {{"rows", rows}};
}

json nest_dotted_keys(const json& doc) { return unflatten_dotted(doc); }

}  // namespace netpool
