#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rigc/community.hpp"
#include "rigc/error.hpp"
#include "rigc/pmf.hpp"
#include "rigc/random.hpp"

namespace rigc {

/// Distinct community graphs referenced by a parameter set, with display names
/// and cached role statistics.
struct TypeTable {
  std::vector<CommunityGraph> graphs;
  std::vector<std::string> names;
  std::vector<RoleStats> roles;

  std::size_t index_of(const CommunityGraph& h) const {
    for (std::size_t i = 0; i < graphs.size(); ++i)
      if (graphs[i] == h) return i;
    throw Error(ErrorCode::InvalidArgument, "community graph not in type table");
  }

  /// Adds h if absent and returns its index.
  std::size_t intern(const CommunityGraph& h, const std::string& name = {}) {
    for (std::size_t i = 0; i < graphs.size(); ++i)
      if (graphs[i] == h) return i;
    graphs.push_back(h);
    names.push_back(name.empty() ? h.canonical_id() : name);
    roles.push_back(role_stats(h));
    return graphs.size() - 1;
  }
};

/// Validated model parameters (d^l, Com). The half-edge identity
/// sum(d^l) == sum(|Com_a|) holds for every constructed instance.
class ModelParams {
 public:
  static ModelParams from_explicit(std::vector<int> l_degrees, const std::vector<CommunityGraph>& communities) {
    auto table = std::make_shared<TypeTable>();
    std::vector<std::uint32_t> types;
    types.reserve(communities.size());
    for (const auto& h : communities) types.push_back(static_cast<std::uint32_t>(table->intern(h)));
    return ModelParams(std::move(l_degrees), std::move(table), std::move(types));
  }

  /// Same as from_explicit but with communities given as indices into a shared table.
  static ModelParams from_types(std::vector<int> l_degrees, std::shared_ptr<const TypeTable> table,
                                std::vector<std::uint32_t> types) {
    return ModelParams(std::move(l_degrees), std::move(table), std::move(types));
  }

  std::size_t individuals() const { return l_degrees_.size(); }
  std::size_t community_count() const { return types_.size(); }
  std::uint64_t half_edges() const { return h_; }

  const std::vector<int>& l_degrees() const { return l_degrees_; }
  int l_degree(std::size_t v) const { return l_degrees_[v]; }
  int r_degree(std::size_t a) const { return table_->graphs[types_[a]].size(); }
  std::uint32_t community_type(std::size_t a) const { return types_[a]; }
  const std::vector<std::uint32_t>& community_types() const { return types_; }
  const CommunityGraph& community(std::size_t a) const { return table_->graphs[types_[a]]; }
  const RoleStats& community_roles(std::size_t a) const { return table_->roles[types_[a]]; }
  const TypeTable& types() const { return *table_; }
  std::shared_ptr<const TypeTable> type_table() const { return table_; }

  std::vector<int> r_degrees() const {
    std::vector<int> out(types_.size());
    for (std::size_t a = 0; a < types_.size(); ++a) out[a] = r_degree(a);
    return out;
  }
  std::vector<CommunityGraph> communities() const {
    std::vector<CommunityGraph> out;
    out.reserve(types_.size());
    for (auto t : types_) out.push_back(table_->graphs[t]);
    return out;
  }

 private:
  ModelParams(std::vector<int> l_degrees, std::shared_ptr<const TypeTable> table, std::vector<std::uint32_t> types)
      : l_degrees_(std::move(l_degrees)), table_(std::move(table)), types_(std::move(types)) {
    if (l_degrees_.empty() || types_.empty()) throw Error(ErrorCode::Empty, "empty degree or community sequence");
    std::uint64_t l_sum = 0, r_sum = 0;
    for (int d : l_degrees_) {
      if (d < 1) throw Error(ErrorCode::ZeroDegree, "l-degree " + std::to_string(d) + " < 1");
      l_sum += static_cast<std::uint64_t>(d);
    }
    for (auto t : types_) {
      if (t >= table_->graphs.size()) throw Error(ErrorCode::InvalidArgument, "community type out of range");
      r_sum += static_cast<std::uint64_t>(table_->graphs[t].size());
    }
    if (l_sum != r_sum) throw HalfEdgeMismatch(l_sum, r_sum);
    h_ = l_sum;
  }

  std::vector<int> l_degrees_;
  std::shared_ptr<const TypeTable> table_;
  std::vector<std::uint32_t> types_;
  std::uint64_t h_ = 0;
};

/// Conditional community tables: size k -> list of (graph, weight).
using ConditionalTables = std::map<int, std::vector<std::pair<CommunityGraph, double>>>;

/// Limiting laws of the model: p (law of D^l), mu (law of Com) and everything
/// derived from them.
class LimitSpec {
 public:
  LimitSpec(Pmf p, CommunityMeasure mu, std::optional<ConditionalTables> conditional = std::nullopt,
            const std::map<std::string, std::string>& names = {})
      : p_(std::move(p)), mu_(std::move(mu)) {
    if (p_[0] > 0.0) throw Error(ErrorCode::InvalidMeasure, "l-degree law puts mass on 0");
    auto table = std::make_shared<TypeTable>();
    std::vector<double> weights;
    for (const auto& [id, w] : mu_.weights) {
      auto nm = names.find(id);
      table->intern(mu_.graphs.at(id), nm == names.end() ? std::string{} : nm->second);
      weights.push_back(w);
    }
    mu_sampler_ = WeightedIndex(weights);
    std::map<int, double> qw(mu_.q.begin(), mu_.q.end());
    q_ = Pmf::from_weights(qw);

    if (conditional) {
      for (const auto& [k, entries] : *conditional) {
        Conditional c;
        std::vector<double> w;
        for (const auto& [h, wt] : entries) {
          if (h.size() != k)
            throw Error(ErrorCode::InvalidMeasure, "conditional table for size " + std::to_string(k) +
                                                       " lists a graph of size " + std::to_string(h.size()));
          if (wt <= 0.0) continue;
          c.types.push_back(static_cast<std::uint32_t>(table->intern(h)));
          w.push_back(wt);
        }
        if (w.empty()) throw Error(ErrorCode::InvalidMeasure, "empty conditional table for size " + std::to_string(k));
        double total = 0.0;
        for (double x : w) total += x;
        for (double& x : w) x /= total;
        c.weights = w;
        c.sampler = WeightedIndex(w);
        conditional_[k] = std::move(c);
      }
    } else {
      // mu_{H|k} = mu_H / q_k
      for (const auto& [k, qk] : mu_.q) {
        Conditional c;
        for (const auto& [id, w] : mu_.weights) {
          const CommunityGraph& h = mu_.graphs.at(id);
          if (h.size() != k) continue;
          c.types.push_back(static_cast<std::uint32_t>(table->index_of(h)));
          c.weights.push_back(w / qk);
        }
        c.sampler = WeightedIndex(c.weights);
        conditional_[k] = std::move(c);
      }
    }
    table_ = std::move(table);
    mu_types_.resize(mu_.weights.size());
    for (std::size_t i = 0; i < mu_types_.size(); ++i) mu_types_[i] = static_cast<std::uint32_t>(i);

    rho_ = role_measure(mu_);
    gamma_ = p_.mean() / q_.mean();
    p_star_ = p_.size_biased();
    q_star_ = q_.size_biased();
    p_tilde_ = p_.tilted();
    q_tilde_ = q_.tilted();
    std::vector<double> rw;
    for (const auto& [kt, w] : rho_) {
      rho_atoms_.push_back(kt);
      rw.push_back(w);
    }
    rho_sampler_ = WeightedIndex(rw);
  }

  const Pmf& p() const { return p_; }
  const Pmf& q() const { return q_; }
  const CommunityMeasure& mu() const { return mu_; }
  const RoleMeasure& rho() const { return rho_; }
  double gamma() const { return gamma_; }
  const Pmf& p_size_biased() const { return p_star_; }
  const Pmf& q_size_biased() const { return q_star_; }
  const Pmf& p_tilde() const { return p_tilde_; }
  const Pmf& q_tilde() const { return q_tilde_; }

  /// Community graphs of the support (and of any explicit conditional tables).
  const TypeTable& types() const { return *table_; }
  std::shared_ptr<const TypeTable> type_table() const { return table_; }

  std::uint32_t sample_community(Rng& rng) const { return mu_types_[mu_sampler_(rng)]; }

  bool has_conditional(int k) const { return conditional_.count(k) != 0; }

  /// Draw from mu_{.|k}; throws MissingConditional when k has no table.
  std::uint32_t sample_conditional(int k, Rng& rng) const {
    auto it = conditional_.find(k);
    if (it == conditional_.end()) throw MissingConditional(k);
    return it->second.types[it->second.sampler(rng)];
  }

  /// Weights of mu_{.|k} as (type index, probability).
  std::vector<std::pair<std::uint32_t, double>> conditional(int k) const {
    auto it = conditional_.find(k);
    if (it == conditional_.end()) throw MissingConditional(k);
    std::vector<std::pair<std::uint32_t, double>> out;
    for (std::size_t i = 0; i < it->second.types.size(); ++i)
      out.push_back({it->second.types[i], it->second.weights[i]});
    return out;
  }

  /// Joint draw of (c-degree, triangle count) from rho.
  std::pair<int, int> sample_role(Rng& rng) const { return rho_atoms_[rho_sampler_(rng)]; }

 private:
  struct Conditional {
    std::vector<std::uint32_t> types;
    std::vector<double> weights;
    WeightedIndex sampler;
  };

  Pmf p_, q_;
  CommunityMeasure mu_;
  RoleMeasure rho_;
  double gamma_ = 0.0;
  Pmf p_star_, q_star_, p_tilde_, q_tilde_;
  std::shared_ptr<const TypeTable> table_;
  std::vector<std::uint32_t> mu_types_;
  WeightedIndex mu_sampler_;
  std::map<int, Conditional> conditional_;
  std::vector<std::pair<int, int>> rho_atoms_;
  WeightedIndex rho_sampler_;
};

inline LimitSpec make_limit_spec(const Pmf& p, const Catalog& catalog,
                                 std::optional<ConditionalTables> conditional = std::nullopt) {
  std::map<std::string, std::string> names;
  for (const auto& e : catalog.entries()) names.emplace(e.graph.canonical_id(), e.name);
  return LimitSpec(p, catalog.measure(), std::move(conditional), names);
}

struct RepairReport {
  std::int64_t initial_gap = 0;        // sum of community sizes minus sum of l-degrees, last attempt
  std::size_t l_adjustments = 0;       // unit increments/decrements of l-degrees
  std::size_t communities_added = 0;   // extra communities drawn when decrements were infeasible
  std::size_t resamples = 0;           // rejected draws whose gap exceeded the budget
  std::size_t budget = 0;
  std::size_t repair_count() const { return l_adjustments + communities_added; }
};

struct GeneratedParams {
  ModelParams params;
  RepairReport repair;
};

struct RepairOptions {
  std::optional<std::size_t> budget;  // default max(10, 0.01 N)
  std::size_t max_attempts = 1000;
};

/// iid l-degrees from p and iid communities from mu, M = max(1, round(N E[D^l]/E[D^r])),
/// then the half-edge sums are equalized by unit changes of uniformly chosen
/// l-degrees (never below 1). A draw whose gap exceeds the budget is rejected
/// and redrawn from the same stream.
inline GeneratedParams generate_iid_repaired(const LimitSpec& spec, std::size_t n, std::uint64_t seed,
                                             const RepairOptions& opts = {}) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  Rng rng = make_rng(seed);
  const std::size_t budget =
      opts.budget ? *opts.budget : std::max<std::size_t>(10, static_cast<std::size_t>(0.01 * static_cast<double>(n)));
  const auto m = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(static_cast<double>(n) * spec.p().mean() / spec.q().mean())));
  const TypeTable& table = spec.types();

  RepairReport report;
  report.budget = budget;
  for (std::size_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
    std::vector<int> deg(n);
    std::int64_t l_sum = 0, r_sum = 0;
    for (auto& d : deg) l_sum += (d = spec.p().sample(rng));
    std::vector<std::uint32_t> types(m);
    for (auto& t : types) r_sum += table.graphs[t = spec.sample_community(rng)].size();

    std::int64_t gap = r_sum - l_sum;
    report.initial_gap = gap;
    if (static_cast<std::size_t>(std::llabs(gap)) > budget) {
      ++report.resamples;
      continue;
    }
    std::size_t adjustments = 0, added = 0;
    std::vector<std::size_t> reducible;
    bool reducible_built = false;
    while (gap != 0 && adjustments + added <= budget) {
      if (gap > 0) {
        ++deg[uniform_below(rng, n)];
        --gap;
        ++adjustments;
        reducible_built = false;
        continue;
      }
      if (!reducible_built) {
        reducible.clear();
        for (std::size_t v = 0; v < n; ++v)
          for (int c = 1; c < deg[v]; ++c) reducible.push_back(v);  // one entry per removable unit
        reducible_built = true;
      }
      if (reducible.empty()) {
        const auto t = spec.sample_community(rng);
        types.push_back(t);
        gap += table.graphs[t].size();
        ++added;
        continue;
      }
      const std::size_t pick = uniform_below(rng, reducible.size());
      --deg[reducible[pick]];
      reducible[pick] = reducible.back();
      reducible.pop_back();
      ++gap;
      ++adjustments;
    }
    if (gap != 0 || adjustments + added > budget) {
      ++report.resamples;
      continue;
    }
    report.l_adjustments = adjustments;
    report.communities_added = added;
    return {ModelParams::from_types(std::move(deg), spec.type_table(), std::move(types)), report};
  }
  throw Error(ErrorCode::InfeasibleRepair, "could not equalize half-edge sums within budget " +
                                               std::to_string(budget) + " after " +
                                               std::to_string(opts.max_attempts) + " attempts");
}

/// Independent draws Com_a ~ mu_{.|r_degrees[a]}; returns indices into spec.types().
inline std::vector<std::uint32_t> generate_conditional_types(const LimitSpec& spec, const std::vector<int>& r_degrees,
                                                             Rng& rng) {
  for (int k : r_degrees)
    if (!spec.has_conditional(k)) throw MissingConditional(k);
  std::vector<std::uint32_t> out;
  out.reserve(r_degrees.size());
  for (int k : r_degrees) out.push_back(spec.sample_conditional(k, rng));
  return out;
}

inline std::vector<CommunityGraph> generate_conditional(const LimitSpec& spec, const std::vector<int>& r_degrees,
                                                        std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<CommunityGraph> out;
  for (auto t : generate_conditional_types(spec, r_degrees, rng)) out.push_back(spec.types().graphs[t]);
  return out;
}

struct AssumptionRow {
  std::size_t n_individuals = 0;
  std::size_t n_communities = 0;
  std::uint64_t half_edges = 0;
  double p_distance = 0.0;      // sup_k |p_n(k) - p(k)|
  double mean_l_gap = 0.0;      // |E[D_n^l] - E[D^l]|
  double mu_distance = 0.0;     // sup_H |mu_n(H) - mu(H)|
  double q_distance = 0.0;
  double mean_r_gap = 0.0;
  double gamma_n = 0.0;
  double gamma = 0.0;
  double dmax_l_ratio = 0.0;    // max d^l / h
  double dmax_r_ratio = 0.0;
};

struct AssumptionReport {
  std::vector<AssumptionRow> rows;
  bool max_degree_flag = false;  // d_max/h not vanishing at the largest size
  bool mean_gap_decreasing = true;
};

struct AssumptionThresholds {
  double max_degree_ratio = 0.05;
};

inline AssumptionReport check_assumptions(const std::vector<ModelParams>& family, const LimitSpec& spec,
                                          const AssumptionThresholds& thr = {}) {
  if (family.size() < 2) throw Error(ErrorCode::InvalidArgument, "assumption diagnostics need at least two sizes");
  AssumptionReport rep;
  for (const auto& mp : family) {
    AssumptionRow row;
    row.n_individuals = mp.individuals();
    row.n_communities = mp.community_count();
    row.half_edges = mp.half_edges();
    const Pmf pn = Pmf::empirical(mp.l_degrees());
    const Pmf qn = Pmf::empirical(mp.r_degrees());
    row.p_distance = pn.sup_distance(spec.p());
    row.q_distance = qn.sup_distance(spec.q());
    row.mean_l_gap = std::abs(pn.mean() - spec.p().mean());
    row.mean_r_gap = std::abs(qn.mean() - spec.q().mean());
    const CommunityMeasure mun = empirical_community_measure(mp.communities());
    double d = 0.0;
    for (const auto& [id, w] : mun.weights) {
      auto it = spec.mu().weights.find(id);
      d = std::max(d, std::abs(w - (it == spec.mu().weights.end() ? 0.0 : it->second)));
    }
    for (const auto& [id, w] : spec.mu().weights)
      if (!mun.weights.count(id)) d = std::max(d, w);
    row.mu_distance = d;
    row.gamma_n = static_cast<double>(mp.community_count()) / static_cast<double>(mp.individuals());
    row.gamma = spec.gamma();
    const auto h = static_cast<double>(mp.half_edges());
    row.dmax_l_ratio = *std::max_element(mp.l_degrees().begin(), mp.l_degrees().end()) / h;
    const auto rd = mp.r_degrees();
    row.dmax_r_ratio = *std::max_element(rd.begin(), rd.end()) / h;
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].mean_l_gap > rep.rows[i - 1].mean_l_gap || rep.rows[i].mean_r_gap > rep.rows[i - 1].mean_r_gap)
      rep.mean_gap_decreasing = false;
  rep.max_degree_flag = rep.rows.back().dmax_l_ratio > thr.max_degree_ratio ||
                        rep.rows.back().dmax_r_ratio > thr.max_degree_ratio;
  return rep;
}

// Explicit parameter files: one l-degree per line; one community name per line.

inline std::vector<int> read_degrees(std::istream& in) {
  std::vector<int> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "degree file line " + std::to_string(lineno) + ": not an integer");
    }
  }
  return out;
}

inline std::vector<std::string> read_names(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (ls >> name) out.push_back(name);
  }
  return out;
}

inline ModelParams params_from_files(const std::string& degree_path, const std::string& community_path,
                                     const Catalog& catalog) {
  std::ifstream din(degree_path), cin(community_path);
  if (!din) throw Error(ErrorCode::Io, "cannot open " + degree_path);
  if (!cin) throw Error(ErrorCode::Io, "cannot open " + community_path);
  auto table = std::make_shared<TypeTable>();
  std::vector<std::uint32_t> types;
  for (const auto& name : read_names(cin)) {
    const auto& e = catalog[catalog.index_of(name)];
    types.push_back(static_cast<std::uint32_t>(table->intern(e.graph, e.name)));
  }
  return ModelParams::from_types(read_degrees(din), std::move(table), std::move(types));
}

inline void write_degrees(std::ostream& out, const ModelParams& mp) {
  for (int d : mp.l_degrees()) out << d << '\n';
}

inline void write_community_names(std::ostream& out, const ModelParams& mp) {
  for (auto t : mp.community_types()) out << mp.types().names[t] << '\n';
}

}  // namespace rigc
