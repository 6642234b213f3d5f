// rigc: command-line front end.
//
//   rigc generate      --config run.json --out dir
//   rigc stats         --in dir | --config run.json
//   rigc limit-sample  --config run.json --radius 2 --out dir
//   rigc compare       --config plan.json
//   rigc enumerate     --degrees 2,2 --communities K2,K2

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rigc/rigc.hpp"

namespace fs = std::filesystem;
using namespace rigc;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  int radius = -1;
  std::string format = "text";
};

bool json_format(const Common& c) { return c.format != "text"; }

void log_run(const std::string& command, const Common& c, const RunConfig* cfg, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = seed;
  j["threads"] = c.threads;
  if (c.radius >= 0) j["radius"] = c.radius;
  if (cfg) {
    j["config_path"] = cfg->source;
    j["config"] = cfg->raw;
  }
  std::cerr << "# " << j.dump() << '\n';
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
  return f;
}

/// Either writes to `path` or to stdout when path is empty.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
  } else {
    auto f = open_out(path);
    write(f);
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(tok);
  return out;
}

struct Instance {
  ModelParams params;
  RepairReport repair;
  std::uint64_t seed;
};

Instance build_params(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.explicit_files) {
    Catalog cat = cfg.catalog;
    std::ifstream cin(cfg.explicit_files->second);
    if (!cin) throw Error(ErrorCode::Io, "cannot open " + cfg.explicit_files->second);
    for (const auto& name : read_names(cin))
      if (!cat.contains(name)) {
        auto g = builtin_graph(name);
        if (!g) throw Error(ErrorCode::Parse, "unknown community '" + name + "'");
        cat.add(name, *g);
      }
    return {params_from_files(cfg.explicit_files->first, cfg.explicit_files->second, cat), {}, seed};
  }
  if (!cfg.spec) throw Error(ErrorCode::Parse, "config needs degree_pmf/communities or explicit files");
  if (cfg.n == 0) throw Error(ErrorCode::Parse, "config needs N");
  auto gen = generate_iid_repaired(*cfg.spec, cfg.n, derive_seed(seed, 0), cfg.repair);
  return {std::move(gen.params), gen.repair, seed};
}

void write_type_catalog(std::ostream& out, const TypeTable& t) {
  for (std::size_t i = 0; i < t.graphs.size(); ++i) {
    out << t.names[i] << " 0 " << t.graphs[i].size();
    for (auto [a, b] : t.graphs[i].edges()) out << ' ' << a << '-' << b;
    out << '\n';
  }
}

int cmd_generate(const Common& c) {
  const RunConfig cfg = load_config(c.config);
  const std::uint64_t seed = c.seed.value_or(cfg.seed);
  log_run("generate", c, &cfg, seed);
  if (c.out.empty()) throw Error(ErrorCode::InvalidArgument, "generate needs --out");
  fs::create_directories(c.out);
  const fs::path dir(c.out);

  const Instance inst = build_params(cfg, seed);
  const BipartiteMatching m = sample_uniform_matching(inst.params, derive_seed(seed, 1));
  const ProjectedGraph g = project(m, false);

  { auto f = open_out(dir / "degrees.txt"); write_degrees(f, inst.params); }
  { auto f = open_out(dir / "communities.txt"); write_community_names(f, inst.params); }
  { auto f = open_out(dir / "catalog.txt"); write_type_catalog(f, inst.params.types()); }
  { auto f = open_out(dir / "matching.txt"); write_matching(f, m); }
  { auto f = open_out(dir / "projected.txt"); write_projected(f, g); }

  nlohmann::ordered_json man;
  man["seed"] = seed;
  man["config"] = cfg.raw;
  man["individuals"] = inst.params.individuals();
  man["communities"] = inst.params.community_count();
  man["half_edges"] = inst.params.half_edges();
  man["edge_instances"] = g.edge_instances();
  man["repair"] = {{"count", inst.repair.repair_count()},
                   {"l_adjustments", inst.repair.l_adjustments},
                   {"communities_added", inst.repair.communities_added},
                   {"resamples", inst.repair.resamples},
                   {"budget", inst.repair.budget}};
  man["files"] = {"degrees.txt", "communities.txt", "catalog.txt", "matching.txt", "projected.txt"};
  { auto f = open_out(dir / "manifest.json"); f << man.dump(2) << '\n'; }
  std::cout << "wrote " << dir.string() << ": N=" << inst.params.individuals()
            << " M=" << inst.params.community_count() << " h=" << inst.params.half_edges()
            << " repairs=" << inst.repair.repair_count() << '\n';
  return 0;
}

/// Reloads a generate output directory.
BipartiteMatching load_generated(const fs::path& dir) {
  const Catalog cat = read_catalog_file((dir / "catalog.txt").string());
  const ModelParams params =
      params_from_files((dir / "degrees.txt").string(), (dir / "communities.txt").string(), cat);
  std::ifstream in(dir / "matching.txt");
  if (!in) throw Error(ErrorCode::Io, "cannot open " + (dir / "matching.txt").string());
  return read_matching(in, params);
}

int cmd_stats(const Common& c, const std::string& in_dir) {
  std::optional<BipartiteMatching> m;
  if (!in_dir.empty()) {
    log_run("stats", c, nullptr, 0);
    m.emplace(load_generated(in_dir));
  } else {
    const RunConfig cfg = load_config(c.config);
    const std::uint64_t seed = c.seed.value_or(cfg.seed);
    log_run("stats", c, &cfg, seed);
    const Instance inst = build_params(cfg, seed);
    m.emplace(sample_uniform_matching(inst.params, derive_seed(seed, 1)));
  }
  const ProjectedGraph g = project(*m, false);
  const StatsReport r = compute_stats(*m, g);
  emit(c.out, [&](std::ostream& os) {
    if (json_format(c)) os << to_json(r).dump(2) << '\n';
    else write_text(os, r);
  });
  return 0;
}

int cmd_limit(const Common& c, std::size_t samples) {
  const RunConfig cfg = load_config(c.config);
  if (!cfg.spec) throw Error(ErrorCode::Parse, "limit-sample needs degree_pmf and communities");
  const std::uint64_t seed = c.seed.value_or(cfg.seed);
  const int radius = c.radius >= 0 ? c.radius : cfg.radius;
  if (samples == 0) samples = cfg.limit_samples;
  log_run("limit-sample", c, &cfg, seed);
  const LimitSpec& spec = *cfg.spec;

  Rng rng = make_rng(derive_seed(seed, kLimitStream));
  std::vector<std::uint64_t> dp(samples);
  std::vector<double> zeta(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const ZetaDraw z = sample_zeta(spec, rng);
    dp[i] = z.degree;
    zeta[i] = z.value();
  }
  const auto dp_cdf = EmpiricalCdf<std::uint64_t>::from_samples(dp);
  const auto zeta_cdf = EmpiricalCdf<double>::from_samples(zeta);
  const auto dp_exact = exact_Dp_law(spec);
  const auto zeta_exact = exact_zeta_law(spec);

  Rng cp_rng = make_rng(derive_seed(seed, 10 + static_cast<std::uint64_t>(radius)));
  NeighborhoodCensus cp;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const CpSample s = sample_cp(spec, radius, cp_rng);
    const CpStructure st = check_cp_structure(s);
    violations += !st.simple || !st.single_overlap;
    cp.add(s.ball);
  }

  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["samples"] = samples;
  j["radius"] = radius;
  j["gamma"] = spec.gamma();
  j["overlap_limit"] = overlap_limit(spec);
  j["positive_clustering"] = positive_clustering(spec);
  j["global_clustering_limit"] = {{"value", global_clustering_limit(spec)}, {"status", "conjectural"}};
  j["Dp_sampled"] = cdf_to_json(dp_cdf);
  j["zeta_sampled"] = cdf_to_json(zeta_cdf);
  if (dp_exact) j["Dp_exact"] = cdf_to_json(EmpiricalCdf<std::uint64_t>::from_law(*dp_exact));
  if (zeta_exact) j["zeta_exact"] = cdf_to_json(EmpiricalCdf<double>::from_law(*zeta_exact));
  j["cp_classes"] = cp.counts.size();
  j["cp_structure_violations"] = violations;

  if (!c.out.empty()) {
    fs::create_directories(c.out);
    { auto f = open_out(fs::path(c.out) / "cp_census.txt"); write_census(f, cp); }
    { auto f = open_out(fs::path(c.out) / "cp_census_keys.txt"); write_census_sidecar(f, cp); }
  }
  emit(c.out.empty() ? "" : (fs::path(c.out) / (json_format(c) ? "limits.json" : "limits.txt")).string(),
       [&](std::ostream& os) {
         if (json_format(c)) {
           os << j.dump(2) << '\n';
           return;
         }
         os << "gamma " << spec.gamma() << "\noverlap_limit " << overlap_limit(spec) << "\npositive_clustering "
            << (positive_clustering(spec) ? "true" : "false") << "\nglobal_clustering_limit "
            << global_clustering_limit(spec) << " (conjectural)\n\n[Dp sampled, n=" << samples << "]\n";
         write_cdf_table(os, dp_cdf);
         if (dp_exact) {
           os << "\n[Dp exact]\n";
           write_cdf_table(os, EmpiricalCdf<std::uint64_t>::from_law(*dp_exact));
         }
         os << "\n[zeta sampled]\n";
         write_cdf_table(os, zeta_cdf);
         if (zeta_exact) {
           os << "\n[zeta exact]\n";
           write_cdf_table(os, EmpiricalCdf<double>::from_law(*zeta_exact));
         }
         os << "\ncp radius " << radius << ": " << cp.counts.size() << " classes, " << violations
            << " structure violations\n";
       });
  return violations == 0 ? 0 : 1;
}

int cmd_compare(const Common& c) {
  RunConfig cfg = load_config(c.config);
  if (!cfg.plan) throw Error(ErrorCode::Parse, "compare needs a plan in the config");
  ExperimentPlan plan = *cfg.plan;
  if (c.seed) plan.seed = *c.seed;
  plan.threads = c.threads;
  if (c.radius >= 0) plan.radii = {c.radius};
  log_run("compare", c, &cfg, plan.seed);
  const ComparisonReport r = run_plan(plan);
  emit(c.out, [&](std::ostream& os) {
    if (json_format(c)) os << to_json(r).dump(2) << '\n';
    else write_text(os, r);
  });
  return r.pass() ? 0 : 1;
}

int cmd_enumerate(const Common& c, const std::string& degrees, const std::string& communities, std::size_t bound) {
  std::optional<ModelParams> params;
  if (!degrees.empty()) {
    log_run("enumerate", c, nullptr, 0);
    // Each argument is either a comma list or a file in the generate format.
    std::vector<int> d;
    if (std::filesystem::is_regular_file(degrees)) {
      std::ifstream in(degrees);
      d = read_degrees(in);
    } else {
      for (const auto& s : split_list(degrees)) {
        std::size_t used = 0;
        int k = -1;
        try {
          k = std::stoi(s, &used);
        } catch (const std::exception&) {
        }
        if (k < 0 || used != s.size()) throw Error(ErrorCode::Parse, "bad degree '" + s + "'");
        d.push_back(k);
      }
    }
    std::vector<std::string> names;
    if (std::filesystem::is_regular_file(communities)) {
      std::ifstream in(communities);
      names = read_names(in);
    } else {
      names = split_list(communities);
    }
    std::vector<CommunityGraph> com;
    for (const auto& name : names) {
      auto g = builtin_graph(name);
      if (!g) throw Error(ErrorCode::Parse, "unknown community '" + name + "'");
      com.push_back(*g);
    }
    params.emplace(ModelParams::from_explicit(d, com));
  } else {
    const RunConfig cfg = load_config(c.config);
    log_run("enumerate", c, &cfg, 0);
    if (!cfg.explicit_files) throw Error(ErrorCode::Parse, "enumerate needs explicit parameters");
    params.emplace(build_params(cfg, 0).params);
  }
  const StatTally t = enumerate_statistics(*params, bound);
  emit(c.out, [&](std::ostream& os) {
    if (json_format(c)) os << to_json(t).dump(2) << '\n';
    else write_text(os, t);
  });
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "JSON run configuration");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "master seed (overrides the config)");
  sub->add_option("--out", c.out, "output file or directory");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--radius", c.radius, "neighbourhood radius")->check(CLI::Range(0, 3));
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json", "json-like"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random intersection graphs with communities: generator, statistics and limit checks"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("generate", "sample parameters, matching and projected graph");
  add_common(gen, c, true);

  std::string in_dir;
  auto* st = app.add_subcommand("stats", "statistics report for a generated instance");
  add_common(st, c, false);
  st->add_option("--in", in_dir, "directory written by generate")->check(CLI::ExistingDirectory);

  std::size_t samples = 0;
  auto* lim = app.add_subcommand("limit-sample", "sample D^p, zeta and CP balls");
  add_common(lim, c, true);
  lim->add_option("--samples", samples, "number of draws");

  auto* cmp = app.add_subcommand("compare", "run a convergence plan; nonzero exit iff a verdict fails");
  add_common(cmp, c, true);

  std::string degrees, communities;
  std::size_t bound = kDefaultEnumerationBound;
  auto* en = app.add_subcommand("enumerate", "exact tables over all h! matchings");
  add_common(en, c, false);
  en->add_option("--degrees", degrees, "comma-separated l-degrees");
  en->add_option("--communities", communities, "comma-separated community names");
  en->add_option("--bound", bound, "largest h accepted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(c);
    if (*st) {
      if (in_dir.empty() && c.config.empty()) throw Error(ErrorCode::InvalidArgument, "stats needs --in or --config");
      return cmd_stats(c, in_dir);
    }
    if (*lim) return cmd_limit(c, samples);
    if (*cmp) return cmd_compare(c);
    if (*en) {
      if (degrees.empty() && c.config.empty())
        throw Error(ErrorCode::InvalidArgument, "enumerate needs --degrees/--communities or --config");
      return cmd_enumerate(c, degrees, communities, bound);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
