#pragma once

// Finite-n statistics of a RIGC instance: projected degrees, triangles and
// clustering, and the community overlap census.
//
// Triangle convention: Delta(v) sums X(v,w) X(w,u) X(u,v) over unordered
// pairs {w,u} of distinct vertices different from v, i.e. every choice of
// three edge instances closing a triangle through v counts once. Self-loops
// never take part in triangles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "json.hpp"
#include "rigc/bcm.hpp"
#include "rigc/projection.hpp"

namespace rigc {

using Rational = boost::rational<long long>;

/// Step CDF over a totally ordered value type.
template <typename T>
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;

  static EmpiricalCdf from_samples(std::vector<T> xs) {
    EmpiricalCdf out;
    out.count_ = xs.size();
    if (xs.empty()) return out;
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < xs.size();) {
      std::size_t j = i;
      while (j < xs.size() && !(xs[i] < xs[j])) ++j;
      out.support_.push_back(xs[i]);
      out.cumulative_.push_back(static_cast<double>(j) / static_cast<double>(xs.size()));
      i = j;
    }
    return out;
  }

  /// Exact law given as value -> probability (need not be sorted or merged).
  static EmpiricalCdf from_law(const std::map<T, double>& law) {
    EmpiricalCdf out;
    double acc = 0.0, total = 0.0;
    for (const auto& [x, w] : law) total += w;
    for (const auto& [x, w] : law) {
      if (w <= 0.0) continue;
      acc += w / total;
      out.support_.push_back(x);
      out.cumulative_.push_back(acc);
    }
    if (!out.cumulative_.empty()) out.cumulative_.back() = 1.0;
    return out;
  }

  /// P(X <= x).
  double operator()(const T& x) const {
    auto it = std::upper_bound(support_.begin(), support_.end(), x);
    if (it == support_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - support_.begin()) - 1];
  }

  const std::vector<T>& support() const { return support_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  std::size_t count() const { return count_; }
  bool empty() const { return support_.empty(); }

  double probability(std::size_t i) const { return cumulative_[i] - (i ? cumulative_[i - 1] : 0.0); }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) m += static_cast<double>(support_[i]) * probability(i);
    return m;
  }

 private:
  std::vector<T> support_;
  std::vector<double> cumulative_;
  std::size_t count_ = 0;
};

/// sup_x |F(x) - G(x)|; attained at a jump point of one of the two.
template <typename T>
double sup_distance(const EmpiricalCdf<T>& f, const EmpiricalCdf<T>& g) {
  double d = 0.0;
  for (const auto& x : f.support()) d = std::max(d, std::abs(f(x) - g(x)));
  for (const auto& x : g.support()) d = std::max(d, std::abs(f(x) - g(x)));
  return d;
}

inline EmpiricalCdf<std::uint64_t> degree_cdf(const ProjectedGraph& g) {
  return EmpiricalCdf<std::uint64_t>::from_samples(g.degrees());
}

inline std::uint64_t choose2(std::uint64_t d) { return d < 2 ? 0 : d * (d - 1) / 2; }

/// Delta(v) for every v.
inline std::vector<std::uint64_t> triangle_counts(const ProjectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::uint64_t> tri(n, 0);
  std::vector<std::uint32_t> mark(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    auto nv = g.neighbors(v);
    for (const auto& x : nv) mark[x.w] = x.mult;
    for (const auto& x : nv) {
      if (x.w <= v) continue;
      for (const auto& y : g.neighbors(x.w)) {
        if (y.w <= x.w || !mark[y.w]) continue;
        const std::uint64_t t = static_cast<std::uint64_t>(x.mult) * y.mult * mark[y.w];
        tri[v] += t;
        tri[x.w] += t;
        tri[y.w] += t;
      }
    }
    for (const auto& x : nv) mark[x.w] = 0;
  }
  return tri;
}

/// Delta(v) for a single vertex.
inline std::uint64_t triangle_count(const ProjectedGraph& g, std::size_t v) {
  std::uint64_t t = 0;
  auto nv = g.neighbors(v);
  for (std::size_t i = 0; i < nv.size(); ++i)
    for (std::size_t j = i + 1; j < nv.size(); ++j) {
      const std::uint32_t x = g.multiplicity(nv[i].w, nv[j].w);
      if (x) t += static_cast<std::uint64_t>(nv[i].mult) * nv[j].mult * x;
    }
  return t;
}

/// Cl(v) = Delta(v) / C(p-deg(v), 2), and 0 when p-deg(v) < 2. Not clamped:
/// a multigraph can push it above 1.
inline Rational local_clustering(const ProjectedGraph& g, std::size_t v) {
  const std::uint64_t w = choose2(g.degree(v));
  if (w == 0) return Rational(0);
  return Rational(static_cast<long long>(triangle_count(g, v)), static_cast<long long>(w));
}

inline double clustering_value(std::uint64_t triangles, std::uint64_t degree) {
  const std::uint64_t w = choose2(degree);
  return w == 0 ? 0.0 : static_cast<double>(triangles) / static_cast<double>(w);
}

inline std::vector<double> local_clustering_values(const ProjectedGraph& g) {
  const auto tri = triangle_counts(g);
  std::vector<double> out(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) out[v] = clustering_value(tri[v], g.degree(v));
  return out;
}

inline EmpiricalCdf<double> clustering_cdf(const ProjectedGraph& g) {
  return EmpiricalCdf<double>::from_samples(local_clustering_values(g));
}

inline double average_local_clustering(const ProjectedGraph& g) {
  if (g.size() == 0) return 0.0;
  double s = 0.0;
  for (double c : local_clustering_values(g)) s += c;
  return s / static_cast<double>(g.size());
}

struct GlobalClustering {
  std::uint64_t triangles = 0;  // sum_v Delta(v)
  std::uint64_t wedges = 0;     // sum_v C(p-deg(v), 2)
  double value() const { return wedges ? static_cast<double>(triangles) / static_cast<double>(wedges) : 0.0; }
};

inline GlobalClustering global_clustering_parts(const ProjectedGraph& g) {
  GlobalClustering out;
  const auto tri = triangle_counts(g);
  for (std::size_t v = 0; v < g.size(); ++v) {
    out.triangles += tri[v];
    out.wedges += choose2(g.degree(v));
  }
  return out;
}

inline double global_clustering(const ProjectedGraph& g) { return global_clustering_parts(g).value(); }

/// Community overlaps O(a,b) = number of individuals belonging to both a and b.
class OverlapCensus {
 public:
  struct Pair {
    std::uint32_t a = 0;  // a < b
    std::uint32_t b = 0;
    std::uint32_t overlap = 0;
  };

  OverlapCensus(std::size_t communities, std::vector<Pair> pairs)
      : communities_(communities), pairs_(std::move(pairs)), neighbors_(communities, 0) {
    std::uint32_t top = 0;
    for (const auto& p : pairs_) {
      top = std::max(top, p.overlap);
      ++neighbors_[p.a];
      ++neighbors_[p.b];
    }
    at_least_.assign(static_cast<std::size_t>(top) + 2, 0);
    for (const auto& p : pairs_) ++at_least_[p.overlap];
    for (std::size_t k = at_least_.size() - 1; k-- > 1;) at_least_[k] += at_least_[k + 1];
    at_least_[0] = 0;
  }

  std::size_t communities() const { return communities_; }
  const std::vector<Pair>& pairs() const { return pairs_; }

  std::uint32_t overlap(std::uint32_t a, std::uint32_t b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair{a, b},
                               [](const Pair& p, const std::pair<std::uint32_t, std::uint32_t>& x) {
                                 return std::pair{p.a, p.b} < x;
                               });
    return it != pairs_.end() && it->a == a && it->b == b ? it->overlap : 0;
  }

  /// |L_k| for k >= 1.
  std::size_t level(std::size_t k) const { return k < at_least_.size() ? at_least_[k] : 0; }
  std::size_t max_overlap() const { return at_least_.size() - 2; }

  /// |N(a)|.
  std::uint32_t neighbor_count(std::size_t a) const { return neighbors_[a]; }

  /// 2 |L_1| / M.
  double mean_neighbors() const {
    return communities_ ? 2.0 * static_cast<double>(level(1)) / static_cast<double>(communities_) : 0.0;
  }
  /// |L_2| / |L_1|, 0 when L_1 is empty.
  double double_overlap_ratio() const {
    return level(1) ? static_cast<double>(level(2)) / static_cast<double>(level(1)) : 0.0;
  }

 private:
  std::size_t communities_;
  std::vector<Pair> pairs_;
  std::vector<std::uint32_t> neighbors_;
  std::vector<std::size_t> at_least_;
};

/// Distinct communities of v, increasing.
inline std::vector<std::uint32_t> communities_of(const BipartiteMatching& m, std::uint32_t v) {
  std::vector<std::uint32_t> cs;
  for (HalfEdge k = m.l_begin(v); k < m.l_end(v); ++k) cs.push_back(m.r_owner(m.partner_of_l(k)));
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return cs;
}

/// Built from each individual's pairs of distinct communities.
inline OverlapCensus overlap_census(const BipartiteMatching& m) {
  std::vector<std::uint64_t> keys;
  for (std::uint32_t v = 0; v < m.l_count(); ++v) {
    if (m.l_end(v) - m.l_begin(v) < 2) continue;
    const auto cs = communities_of(m, v);
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j) keys.push_back(pair_key(cs[i], cs[j]));
  }
  std::sort(keys.begin(), keys.end());
  std::vector<OverlapCensus::Pair> pairs;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    pairs.push_back({static_cast<std::uint32_t>(keys[i] >> 32), static_cast<std::uint32_t>(keys[i] & 0xffffffffu),
                     static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return OverlapCensus(m.r_count(), std::move(pairs));
}

/// v belongs to two communities a, b with O(a,b) >= 2.
inline bool vertex_overlap_indicator(const BipartiteMatching& m, const OverlapCensus& c, std::uint32_t v) {
  const auto cs = communities_of(m, v);
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      if (c.overlap(cs[i], cs[j]) >= 2) return true;
  return false;
}

inline bool vertex_overlap_indicator(const BipartiteMatching& m, std::uint32_t v) {
  return vertex_overlap_indicator(m, overlap_census(m), v);
}

/// Some community b shares at least two individuals with a.
inline std::vector<char> community_multi_overlap_indicators(const OverlapCensus& c) {
  std::vector<char> out(c.communities(), 0);
  for (const auto& p : c.pairs())
    if (p.overlap >= 2) out[p.a] = out[p.b] = 1;
  return out;
}

inline bool community_multi_overlap_indicator(const BipartiteMatching& m, std::uint32_t a) {
  return community_multi_overlap_indicators(overlap_census(m))[a] != 0;
}

inline std::vector<char> vertex_overlap_indicators(const BipartiteMatching& m, const OverlapCensus& c) {
  std::vector<char> out(m.l_count(), 0);
  for (std::uint32_t v = 0; v < m.l_count(); ++v)
    if (m.l_end(v) - m.l_begin(v) >= 2) out[v] = vertex_overlap_indicator(m, c, v);
  return out;
}

struct OverlapSummary {
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  double mean_neighbors = 0.0;     // 2|L_1|/M
  double double_ratio = 0.0;       // |L_2|/|L_1|
  double vertex_indicator = 0.0;   // average over individuals
  double community_indicator = 0.0;
};

inline OverlapSummary summarize_overlaps(const BipartiteMatching& m) {
  const OverlapCensus c = overlap_census(m);
  OverlapSummary s;
  s.l1 = c.level(1);
  s.l2 = c.level(2);
  s.mean_neighbors = c.mean_neighbors();
  s.double_ratio = c.double_overlap_ratio();
  std::size_t vc = 0, cc = 0;
  for (char x : vertex_overlap_indicators(m, c)) vc += x;
  for (char x : community_multi_overlap_indicators(c)) cc += x;
  s.vertex_indicator = static_cast<double>(vc) / static_cast<double>(m.l_count());
  s.community_indicator = static_cast<double>(cc) / static_cast<double>(m.r_count());
  return s;
}

struct StatsReport {
  std::size_t individuals = 0;
  std::size_t communities = 0;
  std::size_t half_edges = 0;
  std::uint64_t edge_instances = 0;
  std::uint64_t self_loops = 0;
  std::size_t multi_edge_pairs = 0;
  EmpiricalCdf<std::uint64_t> degree;
  EmpiricalCdf<double> clustering;
  double average_clustering = 0.0;
  GlobalClustering global;
  OverlapSummary overlaps;
};

inline StatsReport compute_stats(const BipartiteMatching& m, const ProjectedGraph& g) {
  StatsReport r;
  r.individuals = m.l_count();
  r.communities = m.r_count();
  r.half_edges = m.half_edges();
  r.edge_instances = g.edge_instances();
  r.self_loops = g.self_loop_total();
  r.multi_edge_pairs = g.multi_edge_pairs();
  const auto deg = g.degrees();
  const auto tri = triangle_counts(g);
  std::vector<double> cl(g.size());
  double sum = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    cl[v] = clustering_value(tri[v], deg[v]);
    sum += cl[v];
    r.global.triangles += tri[v];
    r.global.wedges += choose2(deg[v]);
  }
  r.average_clustering = g.size() ? sum / static_cast<double>(g.size()) : 0.0;
  r.degree = EmpiricalCdf<std::uint64_t>::from_samples(deg);
  r.clustering = EmpiricalCdf<double>::from_samples(std::move(cl));
  r.overlaps = summarize_overlaps(m);
  return r;
}

template <typename T>
nlohmann::ordered_json cdf_to_json(const EmpiricalCdf<T>& f) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < f.support().size(); ++i)
    rows.push_back({{"x", f.support()[i]}, {"p", f.probability(i)}, {"F", f.cumulative()[i]}});
  return rows;
}

inline nlohmann::ordered_json to_json(const StatsReport& r) {
  nlohmann::ordered_json j;
  j["individuals"] = r.individuals;
  j["communities"] = r.communities;
  j["half_edges"] = r.half_edges;
  j["edge_instances"] = r.edge_instances;
  j["self_loops"] = r.self_loops;
  j["multi_edge_pairs"] = r.multi_edge_pairs;
  j["degree_cdf"] = cdf_to_json(r.degree);
  j["clustering_cdf"] = cdf_to_json(r.clustering);
  j["average_local_clustering"] = r.average_clustering;
  j["global_clustering"] = {{"value", r.global.value()},
                            {"triangles", r.global.triangles},
                            {"wedges", r.global.wedges},
                            {"limit_status", "conjectural"}};
  j["overlaps"] = {{"L1", r.overlaps.l1},
                   {"L2", r.overlaps.l2},
                   {"mean_neighbors", r.overlaps.mean_neighbors},
                   {"L2_over_L1", r.overlaps.double_ratio},
                   {"vertex_indicator_mean", r.overlaps.vertex_indicator},
                   {"community_indicator_mean", r.overlaps.community_indicator}};
  return j;
}

template <typename T>
void write_cdf_table(std::ostream& out, const EmpiricalCdf<T>& f) {
  out << "  x\tP\tF\n";
  for (std::size_t i = 0; i < f.support().size(); ++i)
    out << "  " << f.support()[i] << '\t' << f.probability(i) << '\t' << f.cumulative()[i] << '\n';
}

inline void write_text(std::ostream& out, const StatsReport& r) {
  out << "individuals " << r.individuals << "\ncommunities " << r.communities << "\nhalf_edges " << r.half_edges
      << "\nedge_instances " << r.edge_instances << "\nself_loops " << r.self_loops << "\nmulti_edge_pairs "
      << r.multi_edge_pairs << "\n\n[degree_cdf]\n";
  write_cdf_table(out, r.degree);
  out << "\n[clustering_cdf]\n";
  write_cdf_table(out, r.clustering);
  out << "\naverage_local_clustering " << r.average_clustering << "\nglobal_clustering " << r.global.value()
      << " (limit conjectural)\n\n[overlaps]\nL1 " << r.overlaps.l1 << "\nL2 " << r.overlaps.l2
      << "\nmean_neighbors " << r.overlaps.mean_neighbors << "\nL2_over_L1 " << r.overlaps.double_ratio
      << "\nvertex_indicator_mean " << r.overlaps.vertex_indicator << "\ncommunity_indicator_mean "
      << r.overlaps.community_indicator << '\n';
}

}  // namespace rigc
