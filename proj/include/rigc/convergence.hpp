#pragma once

// Experiment harness: runs (size, replicate) instances, measures distances to
// the limit objects and turns them into per-check verdicts.
//
// Seeds: instance (i, j) uses derive_seed(derive_seed(master, i), j); inside
// an instance, stream 0 draws the parameters, 1 the matching and 10 + r the
// CP samples at radius r. Limit tables use derive_seed(master, kLimitStream).
// Results never depend on the thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "rigc/bcm.hpp"
#include "rigc/census.hpp"
#include "rigc/limits.hpp"
#include "rigc/params.hpp"
#include "rigc/projection.hpp"
#include "rigc/random.hpp"
#include "rigc/stats.hpp"

namespace rigc {

enum class CheckKind { Degree, Clustering, Overlaps, BcmLwc, RigcLwc, Erased };

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Degree: return "degree";
    case CheckKind::Clustering: return "clustering";
    case CheckKind::Overlaps: return "overlaps";
    case CheckKind::BcmLwc: return "bcm_lwc";
    case CheckKind::RigcLwc: return "rigc_lwc";
    case CheckKind::Erased: return "erased";
  }
  return "?";
}

inline CheckKind check_from_string(const std::string& s) {
  for (auto k : {CheckKind::Degree, CheckKind::Clustering, CheckKind::Overlaps, CheckKind::BcmLwc, CheckKind::RigcLwc,
                 CheckKind::Erased})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown check '" + s + "'");
}

/// Tolerance floors; with adaptive on, tolerance = max(floor, 3 sd) at the largest size.
struct Tolerances {
  double degree_sup = 0.01;
  double clustering_sup = 0.02;
  double clustering_mean = 0.01;
  double overlap_relative = 0.05;
  double single_overlap = 0.02;
  double bcm_tv = 0.02;
  double rigc_tv = 0.03;
  double erased_sup = 0.01;
  bool adaptive = true;
  double trend_slack_sd = 2.0;
};

struct ExperimentPlan {
  std::shared_ptr<const LimitSpec> spec;
  std::vector<std::size_t> sizes;
  std::size_t replicates = 1;
  std::vector<int> radii{0, 1, 2};
  Tolerances tolerances;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t limit_samples = 1'000'000;   // D^p / zeta draws when no exact law is available
  std::optional<std::size_t> cp_samples;   // default: matched to N
  RepairOptions repair;
  std::vector<CheckKind> checks{CheckKind::Degree, CheckKind::Clustering, CheckKind::Overlaps,
                                CheckKind::BcmLwc, CheckKind::RigcLwc,    CheckKind::Erased};

  void validate() const {
    if (!spec) throw Error(ErrorCode::InvalidArgument, "plan has no limit spec");
    if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "plan has no sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
      if (sizes[i] <= sizes[i - 1]) throw Error(ErrorCode::InvalidArgument, "plan sizes must be strictly increasing");
    if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "plan needs at least one replicate");
    for (int r : radii)
      if (r < 0 || r > 3) throw Error(ErrorCode::InvalidArgument, "census radii must lie in [0, 3]");
  }
};

inline constexpr std::uint64_t kLimitStream = 0x11117;

/// One statistic tracked across sizes.
struct CheckRow {
  std::string statistic;
  std::string metric;                  // sup, tv, abs, rel, value
  std::vector<double> mean;            // per size, over replicates
  std::vector<double> sd;              // per size, across replicates
  std::optional<double> limit;         // limit value when the statistic is not itself a distance
  std::optional<double> tolerance;     // none: informational
  bool trend = true;                   // require nonincreasing across sizes (with slack)
  bool within_tolerance = true;
  bool trend_ok = true;
  bool verdict = true;
};

struct CheckReport {
  CheckKind kind = CheckKind::Degree;
  std::vector<CheckRow> rows;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;
  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.verdict; }) && gate;
  }
  bool gate = true;  // extra exact conditions (e.g. the positive-clustering equivalence)
};

struct ComparisonReport {
  std::vector<std::size_t> sizes;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<CheckReport> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass(); });
  }
  const CheckReport& get(CheckKind k) const {
    for (const auto& c : checks)
      if (c.kind == k) return c;
    throw Error(ErrorCode::InvalidArgument, std::string("report has no check ") + to_string(k));
  }
};

/// Runs f(0..count-1) on up to `threads` workers. Each index is independent.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Limit-side tables shared by all instances.
struct LimitTables {
  EmpiricalCdf<std::uint64_t> degree;
  EmpiricalCdf<double> zeta;
  double zeta_mean = 0.0;
  bool exact = false;
  double overlap = 0.0;
  bool positive_clustering = false;
};

inline LimitTables build_limit_tables(const ExperimentPlan& plan) {
  const LimitSpec& spec = *plan.spec;
  LimitTables t;
  auto dp = exact_Dp_law(spec);
  auto zl = exact_zeta_law(spec);
  if (dp && zl) {
    t.exact = true;
    t.degree = EmpiricalCdf<std::uint64_t>::from_law(*dp);
    t.zeta = EmpiricalCdf<double>::from_law(*zl);
    for (const auto& [x, w] : *zl) t.zeta_mean += x * w;
  } else {
    Rng rng = make_rng(derive_seed(plan.seed, kLimitStream));
    std::vector<std::uint64_t> d(plan.limit_samples);
    std::vector<double> z(plan.limit_samples);
    for (std::size_t i = 0; i < plan.limit_samples; ++i) {
      const ZetaDraw draw = sample_zeta(spec, rng);
      d[i] = draw.degree;
      z[i] = draw.value();
      t.zeta_mean += z[i];
    }
    t.zeta_mean /= static_cast<double>(plan.limit_samples);
    t.degree = EmpiricalCdf<std::uint64_t>::from_samples(std::move(d));
    t.zeta = EmpiricalCdf<double>::from_samples(std::move(z));
  }
  t.overlap = overlap_limit(spec);
  t.positive_clustering = positive_clustering(spec);
  return t;
}

/// Total variation between a census and the exact BP_s ball law, using one
/// representative per observed class; mass of unobserved classes is 1 minus
/// the observed limit mass.
inline double bcm_census_tv(const LimitSpec& spec, const NeighborhoodCensus& c) {
  double s = 0.0, seen = 0.0;
  for (const auto& [key, count] : c.counts) {
    const double f = static_cast<double>(count) / static_cast<double>(c.total);
    double pi = 0.0;
    if (key != kLargeKey) pi = bp_ball_probability(spec, c.representatives.at(key));
    seen += pi;
    s += std::abs(f - pi);
  }
  return 0.5 * (s + std::max(0.0, 1.0 - seen));
}

namespace detail {

struct InstanceValues {
  std::map<std::string, double> values;
  std::map<CheckKind, double> seconds;
  std::uint64_t cp_violations = 0;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline InstanceValues run_instance(const ExperimentPlan& plan, const LimitTables& lim, std::size_t size_index,
                                   std::size_t replicate, const std::set<CheckKind>& checks) {
  const LimitSpec& spec = *plan.spec;
  const std::size_t n = plan.sizes[size_index];
  const std::uint64_t seed = derive_seed(derive_seed(plan.seed, size_index), replicate);
  InstanceValues out;
  auto& v = out.values;

  Stopwatch setup;
  const GeneratedParams gen = generate_iid_repaired(spec, n, derive_seed(seed, 0), plan.repair);
  const BipartiteMatching m = sample_uniform_matching(gen.params, derive_seed(seed, 1));
  const ProjectedGraph g = project(m, false);
  const double setup_s = setup.seconds() / static_cast<double>(checks.size());
  v["repairs"] = static_cast<double>(gen.repair.repair_count());

  std::optional<EmpiricalCdf<std::uint64_t>> deg;
  std::optional<EmpiricalCdf<double>> clu;
  std::vector<double> cl_values;
  auto need_deg = [&]() -> const EmpiricalCdf<std::uint64_t>& {
    if (!deg) deg = degree_cdf(g);
    return *deg;
  };
  auto need_clu = [&]() -> const EmpiricalCdf<double>& {
    if (!clu) {
      cl_values = local_clustering_values(g);
      clu = EmpiricalCdf<double>::from_samples(cl_values);
    }
    return *clu;
  };

  for (CheckKind k : checks) {
    Stopwatch sw;
    switch (k) {
      case CheckKind::Degree:
        v["degree_sup"] = sup_distance(need_deg(), lim.degree);
        break;
      case CheckKind::Clustering: {
        v["clustering_sup"] = sup_distance(need_clu(), lim.zeta);
        double mean = 0.0;
        for (double x : cl_values) mean += x;
        mean /= static_cast<double>(cl_values.size());
        v["clustering_mean"] = mean;
        v["clustering_mean_gap"] = std::abs(mean - lim.zeta_mean);
        v["global_clustering"] = global_clustering(g);
        break;
      }
      case CheckKind::Overlaps: {
        const OverlapSummary s = summarize_overlaps(m);
        v["mean_neighbors"] = s.mean_neighbors;
        v["mean_neighbors_rel_err"] =
            lim.overlap > 0.0 ? std::abs(s.mean_neighbors - lim.overlap) / lim.overlap : std::abs(s.mean_neighbors);
        v["vertex_indicator"] = s.vertex_indicator;
        v["community_indicator"] = s.community_indicator;
        v["L2_over_L1"] = s.double_ratio;
        break;
      }
      case CheckKind::BcmLwc:
        for (int r : plan.radii) {
          const NeighborhoodCensus c = neighborhood_frequencies(m, RootSet::All, r, MarkMode::Side);
          v["bcm_tv_r" + std::to_string(r)] = bcm_census_tv(spec, c);
          v["bcm_large_r" + std::to_string(r)] = static_cast<double>(c.large);
        }
        break;
      case CheckKind::RigcLwc:
        for (int r : plan.radii) {
          const NeighborhoodCensus c = neighborhood_frequencies(g, r);
          NeighborhoodCensus cp;
          Rng rng = make_rng(derive_seed(seed, 10 + static_cast<std::uint64_t>(r)));
          const std::size_t count = plan.cp_samples.value_or(n);
          for (std::size_t i = 0; i < count; ++i) {
            const CpSample s = sample_cp(spec, r, rng);
            const CpStructure st = check_cp_structure(s);
            if (!st.simple || !st.single_overlap) ++out.cp_violations;
            cp.add(s.ball, false);
          }
          v["rigc_tv_r" + std::to_string(r)] = total_variation(c.frequencies(), cp.frequencies());
          v["rigc_large_r" + std::to_string(r)] = static_cast<double>(c.large + cp.large);
        }
        v["cp_violations"] = static_cast<double>(out.cp_violations);
        break;
      case CheckKind::Erased: {
        const ProjectedGraph e = erase(g);
        v["erased_degree_sup"] = sup_distance(need_deg(), degree_cdf(e));
        v["erased_clustering_sup"] = sup_distance(need_clu(), clustering_cdf(e));
        v["defect_density"] = g.edge_instances()
                                  ? static_cast<double>(g.self_loop_total() + g.multi_edge_pairs()) /
                                        static_cast<double>(g.edge_instances())
                                  : 0.0;
        break;
      }
    }
    out.seconds[k] = sw.seconds() + setup_s;
  }
  return out;
}

inline CheckRow make_row(const std::string& stat, const std::string& metric,
                         const std::vector<std::vector<InstanceValues>>& inst, std::optional<double> floor,
                         const Tolerances& tol, bool trend = true, std::optional<double> limit = std::nullopt) {
  CheckRow row;
  row.statistic = stat;
  row.metric = metric;
  row.limit = limit;
  row.trend = trend;
  for (const auto& reps : inst) {
    double s = 0.0, s2 = 0.0;
    for (const auto& iv : reps) {
      const double x = iv.values.at(stat);
      s += x;
      s2 += x * x;
    }
    const double k = static_cast<double>(reps.size());
    const double mean = s / k;
    row.mean.push_back(mean);
    row.sd.push_back(reps.size() > 1 ? std::sqrt(std::max(0.0, (s2 - k * mean * mean) / (k - 1.0))) : 0.0);
  }
  if (floor) row.tolerance = tol.adaptive ? std::max(*floor, 3.0 * row.sd.back()) : *floor;
  row.within_tolerance = !row.tolerance || row.mean.back() <= *row.tolerance;
  if (trend)
    for (std::size_t i = 1; i < row.mean.size(); ++i)
      if (row.mean[i] > row.mean[i - 1] + tol.trend_slack_sd * std::max(row.sd[i], row.sd[i - 1])) row.trend_ok = false;
  row.verdict = !row.tolerance || (row.within_tolerance && (!trend || row.trend_ok));
  return row;
}

}  // namespace detail

/// Runs every requested check over all (size, replicate) instances.
inline ComparisonReport run_plan(const ExperimentPlan& plan) {
  plan.validate();
  const std::set<CheckKind> checks(plan.checks.begin(), plan.checks.end());
  const LimitTables lim = build_limit_tables(plan);
  const std::size_t sizes = plan.sizes.size(), reps = plan.replicates;
  std::vector<std::vector<detail::InstanceValues>> inst(sizes, std::vector<detail::InstanceValues>(reps));
  parallel_for(sizes * reps, plan.threads, [&](std::size_t job) {
    inst[job / reps][job % reps] = detail::run_instance(plan, lim, job / reps, job % reps, checks);
  });

  ComparisonReport rep;
  rep.sizes = plan.sizes;
  rep.replicates = reps;
  rep.seed = plan.seed;
  const Tolerances& tol = plan.tolerances;
  for (CheckKind k : plan.checks) {
    CheckReport c;
    c.kind = k;
    for (const auto& reps_at : inst)
      for (const auto& iv : reps_at) c.runtime_seconds += iv.seconds.at(k);
    using detail::make_row;
    switch (k) {
      case CheckKind::Degree:
        c.rows.push_back(make_row("degree_sup", "sup", inst, tol.degree_sup, tol));
        c.notes.push_back(lim.exact ? "limit CDF by exact convolution" : "limit CDF from sampled D^p");
        break;
      case CheckKind::Clustering: {
        c.rows.push_back(make_row("clustering_sup", "sup", inst, tol.clustering_sup, tol));
        c.rows.push_back(make_row("clustering_mean_gap", "abs", inst, tol.clustering_mean, tol));
        c.rows.push_back(make_row("clustering_mean", "value", inst, std::nullopt, tol, false, lim.zeta_mean));
        c.rows.push_back(make_row("global_clustering", "value", inst, std::nullopt, tol, false,
                                  global_clustering_limit(*plan.spec)));
        c.gate = (lim.zeta_mean > 0.0) == lim.positive_clustering;
        c.notes.push_back(std::string("positive clustering: E[zeta] > 0 is ") + (lim.zeta_mean > 0.0 ? "true" : "false") +
                          ", triangle-bearing community with positive weight is " +
                          (lim.positive_clustering ? "true" : "false"));
        c.notes.push_back("global clustering limit is conjectural and not gated");
        break;
      }
      case CheckKind::Overlaps:
        c.rows.push_back(make_row("mean_neighbors_rel_err", "rel", inst, tol.overlap_relative, tol));
        c.rows.push_back(make_row("mean_neighbors", "value", inst, std::nullopt, tol, false, lim.overlap));
        c.rows.push_back(make_row("vertex_indicator", "value", inst, tol.single_overlap, tol));
        c.rows.push_back(make_row("community_indicator", "value", inst, tol.single_overlap, tol));
        c.rows.push_back(make_row("L2_over_L1", "value", inst, tol.single_overlap, tol));
        break;
      case CheckKind::BcmLwc:
        for (int r : plan.radii) {
          c.rows.push_back(make_row("bcm_tv_r" + std::to_string(r), "tv", inst, tol.bcm_tv, tol));
          c.rows.push_back(make_row("bcm_large_r" + std::to_string(r), "value", inst, std::nullopt, tol, false));
        }
        break;
      case CheckKind::RigcLwc:
        for (int r : plan.radii) {
          c.rows.push_back(make_row("rigc_tv_r" + std::to_string(r), "tv", inst, tol.rigc_tv, tol));
          c.rows.push_back(make_row("rigc_large_r" + std::to_string(r), "value", inst, std::nullopt, tol, false));
        }
        c.rows.push_back(make_row("cp_violations", "value", inst, std::nullopt, tol, false));
        for (const auto& reps_at : inst)
          for (const auto& iv : reps_at)
            if (iv.cp_violations) c.gate = false;
        break;
      case CheckKind::Erased:
        c.rows.push_back(make_row("erased_degree_sup", "sup", inst, tol.erased_sup, tol));
        c.rows.push_back(make_row("erased_clustering_sup", "sup", inst, tol.erased_sup, tol));
        c.rows.push_back(make_row("defect_density", "value", inst, std::nullopt, tol, false));
        break;
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

inline CheckReport run_single_check(ExperimentPlan plan, CheckKind k) {
  plan.checks = {k};
  return run_plan(plan).checks.front();
}

inline CheckReport check_degree_convergence(const ExperimentPlan& plan) { return run_single_check(plan, CheckKind::Degree); }
inline CheckReport check_clustering_convergence(const ExperimentPlan& plan) {
  return run_single_check(plan, CheckKind::Clustering);
}
inline CheckReport check_overlaps(const ExperimentPlan& plan) { return run_single_check(plan, CheckKind::Overlaps); }
inline CheckReport check_bcm_lwc(const ExperimentPlan& plan) { return run_single_check(plan, CheckKind::BcmLwc); }
inline CheckReport check_rigc_lwc(const ExperimentPlan& plan) { return run_single_check(plan, CheckKind::RigcLwc); }
inline CheckReport check_erased_agreement(const ExperimentPlan& plan) { return run_single_check(plan, CheckKind::Erased); }

inline nlohmann::ordered_json to_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["sizes"] = r.sizes;
  j["replicates"] = r.replicates;
  j["seed"] = r.seed;
  j["pass"] = r.pass();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["check"] = to_string(c.kind);
    cj["pass"] = c.pass();
    cj["runtime_seconds"] = c.runtime_seconds;
    cj["notes"] = c.notes;
    for (const auto& row : c.rows) {
      nlohmann::ordered_json rj;
      rj["statistic"] = row.statistic;
      rj["metric"] = row.metric;
      rj["mean"] = row.mean;
      rj["sd"] = row.sd;
      if (row.limit) rj["limit"] = *row.limit;
      if (row.tolerance) rj["tolerance"] = *row.tolerance;
      rj["trend_ok"] = row.trend_ok;
      rj["verdict"] = row.verdict;
      cj["rows"].push_back(rj);
    }
    j["checks"].push_back(cj);
  }
  return j;
}

inline void write_text(std::ostream& out, const ComparisonReport& r) {
  out << "sizes";
  for (auto n : r.sizes) out << ' ' << n;
  out << "\nreplicates " << r.replicates << "\nseed " << r.seed << "\n";
  for (const auto& c : r.checks) {
    out << "\n[" << to_string(c.kind) << "] " << (c.pass() ? "PASS" : "FAIL") << "  (" << c.runtime_seconds << " s)\n";
    for (const auto& row : c.rows) {
      out << "  " << row.statistic << " [" << row.metric << "]";
      for (std::size_t i = 0; i < row.mean.size(); ++i) out << "  " << row.mean[i] << "+-" << row.sd[i];
      if (row.limit) out << "  limit " << *row.limit;
      if (row.tolerance)
        out << "  tol " << *row.tolerance << (row.trend && !row.trend_ok ? "  trend violated" : "")
            << (row.verdict ? "  ok" : "  FAIL");
      out << '\n';
    }
    for (const auto& n : c.notes) out << "  note: " << n << '\n';
  }
  out << "\noverall " << (r.pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace rigc
