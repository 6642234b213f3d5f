#pragma once

// JSON run configuration: limit laws, community catalog, sizes, seed and an
// optional experiment plan. Relative paths resolve against the config file.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rigc/community.hpp"
#include "rigc/convergence.hpp"
#include "rigc/error.hpp"
#include "rigc/params.hpp"
#include "rigc/pmf.hpp"

namespace rigc {

/// Graphs available by name without a catalog file: K<n>, C<n> or cycle_<n>,
/// P<n> or path_<n>, S<n> or star_<n> (star on n vertices).
inline std::optional<CommunityGraph> builtin_graph(const std::string& name) {
  auto number_after = [&](const std::string& prefix) -> std::optional<int> {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    const std::string rest = name.substr(prefix.size());
    for (char c : rest)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    const int k = std::stoi(rest);
    if (k < 1 || k > kDefaultMaxCommunitySize) return std::nullopt;
    return k;
  };
  if (auto k = number_after("K")) return complete_graph(*k);
  if (auto k = number_after("cycle_"); k && *k >= 3) return cycle_graph(*k);
  if (auto k = number_after("C"); k && *k >= 3) return cycle_graph(*k);
  if (auto k = number_after("path_")) return path_graph(*k);
  if (auto k = number_after("P")) return path_graph(*k);
  if (auto k = number_after("star_")) return star_graph(*k);
  if (auto k = number_after("S")) return star_graph(*k);
  return std::nullopt;
}

struct RunConfig {
  std::string source;                      // config path, for logging
  nlohmann::json raw;                      // the parsed document
  std::uint64_t seed = 0;
  std::size_t n = 0;
  Catalog catalog;                         // every graph referenced by name
  std::shared_ptr<const LimitSpec> spec;   // absent when only explicit parameters are given
  std::optional<std::pair<std::string, std::string>> explicit_files;  // degrees, communities
  RepairOptions repair;
  std::optional<ExperimentPlan> plan;
  std::size_t limit_samples = 100'000;
  int radius = 1;
};

namespace detail {

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path q(p);
  return q.is_absolute() ? p : (base / q).string();
}

inline CommunityGraph lookup_graph(Catalog& cat, const std::string& name) {
  if (cat.contains(name)) return cat[cat.index_of(name)].graph;
  if (auto g = builtin_graph(name)) {
    cat.add(name, *g, 0.0);
    return *g;
  }
  throw Error(ErrorCode::Parse, "unknown community graph '" + name + "'");
}

inline Tolerances parse_tolerances(const nlohmann::json& j, Tolerances t) {
  t.degree_sup = j.value("degree_sup", t.degree_sup);
  t.clustering_sup = j.value("clustering_sup", t.clustering_sup);
  t.clustering_mean = j.value("clustering_mean", t.clustering_mean);
  t.overlap_relative = j.value("overlap_relative", t.overlap_relative);
  t.single_overlap = j.value("single_overlap", t.single_overlap);
  t.bcm_tv = j.value("bcm_tv", t.bcm_tv);
  t.rigc_tv = j.value("rigc_tv", t.rigc_tv);
  t.erased_sup = j.value("erased_sup", t.erased_sup);
  t.adaptive = j.value("adaptive", t.adaptive);
  t.trend_slack_sd = j.value("trend_slack_sd", t.trend_slack_sd);
  return t;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = ".") {
  RunConfig c;
  c.raw = j;
  c.seed = j.value("seed", std::uint64_t{0});
  c.n = j.value("N", std::size_t{0});
  c.limit_samples = j.value("limit_samples", c.limit_samples);
  c.radius = j.value("radius", c.radius);

  if (j.contains("catalog_file")) c.catalog = read_catalog_file(detail::resolve(base, j["catalog_file"].get<std::string>()));
  if (j.contains("catalog"))
    for (const auto& e : j["catalog"]) {
      std::vector<std::pair<int, int>> edges;
      for (const auto& ed : e.at("edges")) edges.push_back({ed.at(0).get<int>(), ed.at(1).get<int>()});
      c.catalog.add(e.at("name").get<std::string>(), canonicalize_one_based(e.at("size").get<int>(), edges),
                    e.value("weight", 0.0));
    }

  if (j.contains("repair")) {
    const auto& r = j["repair"];
    if (r.contains("budget")) c.repair.budget = r["budget"].get<std::size_t>();
    c.repair.max_attempts = r.value("max_attempts", c.repair.max_attempts);
  }

  if (j.contains("explicit")) {
    const auto& e = j["explicit"];
    c.explicit_files = std::pair{detail::resolve(base, e.at("degrees").get<std::string>()),
                                 detail::resolve(base, e.at("communities").get<std::string>())};
  }

  if (j.contains("degree_pmf")) {
    std::map<int, double> w;
    for (const auto& [k, v] : j["degree_pmf"].items()) w[std::stoi(k)] = v.get<double>();
    const Pmf p = Pmf::from_weights(w);

    std::vector<std::pair<CommunityGraph, double>> entries;
    std::map<std::string, std::string> names;
    if (j.contains("communities")) {
      for (const auto& [name, v] : j["communities"].items()) {
        const CommunityGraph g = detail::lookup_graph(c.catalog, name);
        entries.push_back({g, v.get<double>()});
        names.emplace(g.canonical_id(), name);
      }
    } else {
      for (const auto& e : c.catalog.entries())
        if (e.weight > 0.0) {
          entries.push_back({e.graph, e.weight});
          names.emplace(e.graph.canonical_id(), e.name);
        }
    }
    if (entries.empty()) throw Error(ErrorCode::InvalidMeasure, "no community weights given");

    std::optional<ConditionalTables> cond;
    if (j.contains("conditional")) {
      cond.emplace();
      for (const auto& [k, table] : j["conditional"].items())
        for (const auto& [name, v] : table.items()) {
          const CommunityGraph g = detail::lookup_graph(c.catalog, name);
          (*cond)[std::stoi(k)].push_back({g, v.get<double>()});
          names.emplace(g.canonical_id(), name);
        }
    }
    c.spec = std::make_shared<const LimitSpec>(p, make_measure(entries), cond, names);
  }

  if (j.contains("plan")) {
    if (!c.spec) throw Error(ErrorCode::Parse, "a plan needs degree_pmf and communities");
    const auto& pj = j["plan"];
    ExperimentPlan plan;
    plan.spec = c.spec;
    plan.seed = pj.value("seed", c.seed);
    plan.sizes = pj.at("sizes").get<std::vector<std::size_t>>();
    plan.replicates = pj.value("replicates", plan.replicates);
    if (pj.contains("radii")) plan.radii = pj["radii"].get<std::vector<int>>();
    if (pj.contains("tolerances")) plan.tolerances = detail::parse_tolerances(pj["tolerances"], plan.tolerances);
    plan.limit_samples = pj.value("limit_samples", plan.limit_samples);
    if (pj.contains("cp_samples")) plan.cp_samples = pj["cp_samples"].get<std::size_t>();
    if (pj.contains("checks")) {
      plan.checks.clear();
      for (const auto& s : pj["checks"]) plan.checks.push_back(check_from_string(s.get<std::string>()));
    }
    plan.repair = c.repair;
    plan.validate();
    c.plan = std::move(plan);
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  RunConfig c = parse_config(j, std::filesystem::path(path).parent_path());
  c.source = path;
  return c;
}

}  // namespace rigc
