#pragma once

// Rooted r-balls, their exact canonical keys, and neighbourhood frequency
// tables for local weak convergence checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rigc/bcm.hpp"
#include "rigc/canonical.hpp"
#include "rigc/community.hpp"
#include "rigc/error.hpp"
#include "rigc/projection.hpp"

namespace rigc {

enum class MarkMode { None, Side, Community };
enum class RootSet { All, L, R };

inline constexpr std::size_t kDefaultBallBound = 512;
inline const std::string kLargeKey = "LARGE";

/// Closed ball around the root, relabelled in BFS order (root = 0).
struct RootedNeighborhood {
  int radius = 0;
  int n = 0;
  std::vector<std::int64_t> color;  // vertex marks, 0 when unmarked
  std::vector<int> depth;           // distance from the root
  std::vector<int> parent;          // BFS parent, -1 at the root
  std::vector<canon::Edge> edges;   // parallel edges repeated, self-loops as u == v
  bool large = false;               // extraction stopped at the size bound

  std::int64_t root_mark() const { return color.empty() ? 0 : color[0]; }

  bool is_tree() const {
    if (static_cast<int>(edges.size()) != n - 1) return false;
    for (const auto& e : edges)
      if (e.u == e.v) return false;
    return true;
  }
};

namespace detail {

class BallBuilder {
 public:
  explicit BallBuilder(std::size_t vertices) : local_(vertices, -1) {}

  /// BFS to depth r. each(g, visit) must call visit(w) for every neighbour w of g.
  template <typename Each>
  const std::vector<std::uint32_t>& bfs(std::uint32_t root, int r, std::size_t bound, Each&& each,
                                        RootedNeighborhood& nb) {
    for (auto g : order_) local_[g] = -1;
    order_.clear();
    nb = RootedNeighborhood{};
    nb.radius = r;
    order_.push_back(root);
    local_[root] = 0;
    nb.depth.push_back(0);
    nb.parent.push_back(-1);
    for (std::size_t head = 0; head < order_.size() && !nb.large; ++head) {
      const int d = nb.depth[head];
      if (d == r) continue;
      each(order_[head], [&](std::uint32_t w) {
        if (local_[w] >= 0 || nb.large) return;
        if (order_.size() >= bound) {
          nb.large = true;
          return;
        }
        local_[w] = static_cast<int>(order_.size());
        order_.push_back(w);
        nb.depth.push_back(d + 1);
        nb.parent.push_back(static_cast<int>(head));
      });
    }
    nb.n = static_cast<int>(order_.size());
    return order_;
  }

  int local(std::uint32_t g) const { return local_[g]; }

 private:
  std::vector<int> local_;
  std::vector<std::uint32_t> order_;
};

}  // namespace detail

/// Reusable ball extractor on the BCM. l-vertex v has global id v, r-vertex a
/// has id N + a. In community mode r-vertices are marked 1 + type index and
/// each edge carries its r-slot.
class BcmBallExtractor {
 public:
  explicit BcmBallExtractor(const BipartiteMatching& m, std::size_t bound = kDefaultBallBound)
      : m_(m), bound_(bound), builder_(m.l_count() + m.r_count()) {}

  RootedNeighborhood extract(BcmNode root, int r, MarkMode mode) {
    RootedNeighborhood nb;
    const auto n = static_cast<std::uint32_t>(m_.l_count());
    auto each = [this, n](std::uint32_t g, auto&& visit) {
      if (g < n) {
        for (HalfEdge k = m_.l_begin(g); k < m_.l_end(g); ++k) visit(n + m_.r_owner(m_.partner_of_l(k)));
      } else {
        for (HalfEdge q = m_.r_begin(g - n); q < m_.r_end(g - n); ++q) visit(m_.l_owner(m_.partner_of_r(q)));
      }
    };
    const std::uint32_t rid = root.side == Side::L ? root.index : n + root.index;
    const auto& order = builder_.bfs(rid, r, bound_, each, nb);
    nb.color.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::uint32_t g = order[i];
      const bool is_r = g >= n;
      if (mode == MarkMode::Side) nb.color[i] = is_r ? 1 : 0;
      else if (mode == MarkMode::Community) nb.color[i] = is_r ? 1 + m_.params().community_type(g - n) : 0;
      if (is_r) continue;
      for (HalfEdge k = m_.l_begin(g); k < m_.l_end(g); ++k) {
        const HalfEdge q = m_.partner_of_l(k);
        const int j = builder_.local(n + m_.r_owner(q));
        if (j < 0) continue;
        nb.edges.push_back({static_cast<int>(i), j, mode == MarkMode::Community ? m_.r_slot(q) : 0});
      }
    }
    return nb;
  }

 private:
  const BipartiteMatching& m_;
  std::size_t bound_;
  detail::BallBuilder builder_;
};

/// Reusable ball extractor on a projected multigraph (unmarked).
class ProjectedBallExtractor {
 public:
  explicit ProjectedBallExtractor(const ProjectedGraph& g, std::size_t bound = kDefaultBallBound)
      : g_(g), bound_(bound), builder_(g.size()) {}

  RootedNeighborhood extract(std::uint32_t root, int r) {
    RootedNeighborhood nb;
    auto each = [this](std::uint32_t v, auto&& visit) {
      for (const auto& x : g_.neighbors(v)) visit(x.w);
    };
    const auto& order = builder_.bfs(root, r, bound_, each, nb);
    nb.color.assign(order.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::uint32_t v = order[i];
      for (std::uint32_t c = 0; c < g_.self_loops(v); ++c) nb.edges.push_back({static_cast<int>(i), static_cast<int>(i), 0});
      for (const auto& x : g_.neighbors(v)) {
        const int j = builder_.local(x.w);
        if (j <= static_cast<int>(i)) continue;  // absent, or already listed from the other end
        for (std::uint32_t c = 0; c < x.mult; ++c) nb.edges.push_back({static_cast<int>(i), j, 0});
      }
    }
    return nb;
  }

 private:
  const ProjectedGraph& g_;
  std::size_t bound_;
  detail::BallBuilder builder_;
};

inline RootedNeighborhood extract_ball(const BipartiteMatching& m, BcmNode root, int r, MarkMode mode) {
  return BcmBallExtractor(m).extract(root, r, mode);
}

inline RootedNeighborhood extract_ball(const ProjectedGraph& g, std::uint32_t root, int r) {
  return ProjectedBallExtractor(g).extract(root, r);
}

/// Sub-ball of radius r' <= nb.radius: vertices at depth <= r', induced edges.
inline RootedNeighborhood truncate(const RootedNeighborhood& nb, int r) {
  if (r >= nb.radius) return nb;
  RootedNeighborhood out;
  out.radius = r;
  std::vector<int> map(static_cast<std::size_t>(nb.n), -1);
  for (int v = 0; v < nb.n; ++v) {
    if (nb.depth[static_cast<std::size_t>(v)] > r) continue;
    map[static_cast<std::size_t>(v)] = out.n++;
    out.color.push_back(nb.color[static_cast<std::size_t>(v)]);
    out.depth.push_back(nb.depth[static_cast<std::size_t>(v)]);
    const int p = nb.parent[static_cast<std::size_t>(v)];
    out.parent.push_back(p < 0 ? -1 : map[static_cast<std::size_t>(p)]);
  }
  for (const auto& e : nb.edges) {
    const int a = map[static_cast<std::size_t>(e.u)], b = map[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) out.edges.push_back({a, b, e.mark});
  }
  return out;
}

/// Exact canonical key: equal iff the balls are isomorphic as rooted, marked
/// multigraphs. Trees use AHU; anything else goes through canonical labelling
/// with the root individualized. Balls over the bound map to "LARGE".
inline std::string canonical_key(const RootedNeighborhood& nb, std::size_t bound = kDefaultBallBound) {
  if (nb.large || static_cast<std::size_t>(nb.n) > bound) return kLargeKey;
  std::string key;
  if (nb.is_tree()) {
    // BFS parents are the tree parents; find the edge mark to the parent
    std::vector<std::int64_t> pmark(static_cast<std::size_t>(nb.n), 0);
    for (const auto& e : nb.edges) {
      const int child = nb.parent[static_cast<std::size_t>(e.u)] == e.v ? e.u : e.v;
      pmark[static_cast<std::size_t>(child)] = e.mark;
    }
    key.push_back('T');
    canon::append_varints(key, canon::ahu_tokens(nb.parent, nb.color, pmark));
  } else {
    canon::ColoredGraph g;
    g.n = nb.n;
    g.color.resize(static_cast<std::size_t>(nb.n));
    for (int v = 0; v < nb.n; ++v) g.color[static_cast<std::size_t>(v)] = 2 * nb.color[static_cast<std::size_t>(v)] + (v == 0);
    g.edges = nb.edges;
    key.push_back('G');
    canon::append_varints(key, canon::canonical_labeling(g).certificate);
  }
  return key;
}

inline std::string key_hex(const std::string& key) {
  if (key == kLargeKey) return key;
  return detail::to_hex(key);
}

/// Human-readable form of a ball: n, marks, depths and edges (u-v:mark).
inline std::string describe(const RootedNeighborhood& nb) {
  std::ostringstream out;
  out << "n=" << nb.n << " r=" << nb.radius << " marks=";
  for (int v = 0; v < nb.n; ++v) out << (v ? "," : "") << nb.color[static_cast<std::size_t>(v)];
  out << " depth=";
  for (int v = 0; v < nb.n; ++v) out << (v ? "," : "") << nb.depth[static_cast<std::size_t>(v)];
  out << " edges=";
  for (std::size_t i = 0; i < nb.edges.size(); ++i)
    out << (i ? "," : "") << nb.edges[i].u << '-' << nb.edges[i].v << ':' << nb.edges[i].mark;
  return out.str();
}

/// Counts of canonical keys with one representative ball per key.
struct NeighborhoodCensus {
  std::map<std::string, std::uint64_t> counts;
  std::map<std::string, RootedNeighborhood> representatives;
  std::uint64_t total = 0;
  std::uint64_t large = 0;

  void add(const RootedNeighborhood& nb, bool keep_representative = true) {
    const std::string key = canonical_key(nb);
    auto [it, inserted] = counts.emplace(key, 0);
    ++it->second;
    ++total;
    if (key == kLargeKey) ++large;
    if (inserted && keep_representative) representatives.emplace(key, nb);
  }

  void merge(const NeighborhoodCensus& other) {
    for (const auto& [k, c] : other.counts) counts[k] += c;
    for (const auto& [k, nb] : other.representatives) representatives.emplace(k, nb);
    total += other.total;
    large += other.large;
  }

  std::map<std::string, double> frequencies() const {
    std::map<std::string, double> out;
    for (const auto& [k, c] : counts) out[k] = static_cast<double>(c) / static_cast<double>(total);
    return out;
  }
};

inline NeighborhoodCensus neighborhood_frequencies(const BipartiteMatching& m, RootSet roots, int r, MarkMode mode,
                                                   std::size_t bound = kDefaultBallBound) {
  NeighborhoodCensus c;
  BcmBallExtractor ex(m, bound);
  if (roots != RootSet::R)
    for (std::uint32_t v = 0; v < m.l_count(); ++v) c.add(ex.extract({Side::L, v}, r, mode));
  if (roots != RootSet::L)
    for (std::uint32_t a = 0; a < m.r_count(); ++a) c.add(ex.extract({Side::R, a}, r, mode));
  if (c.total == 0) throw Error(ErrorCode::InvalidArgument, "empty root set");
  return c;
}

inline NeighborhoodCensus neighborhood_frequencies(const ProjectedGraph& g, int r,
                                                   std::size_t bound = kDefaultBallBound) {
  NeighborhoodCensus c;
  ProjectedBallExtractor ex(g, bound);
  for (std::uint32_t v = 0; v < g.size(); ++v) c.add(ex.extract(v, r));
  if (c.total == 0) throw Error(ErrorCode::InvalidArgument, "empty root set");
  return c;
}

/// Total variation distance between two frequency tables.
inline double total_variation(const std::map<std::string, double>& f, const std::map<std::string, double>& g) {
  double s = 0.0;
  for (const auto& [k, x] : f) {
    auto it = g.find(k);
    s += std::abs(x - (it == g.end() ? 0.0 : it->second));
  }
  for (const auto& [k, y] : g)
    if (!f.count(k)) s += y;
  return s / 2.0;
}

/// d_loc = 2^{-r_max}, r_max the largest r <= radius with isomorphic r-balls,
/// and -1 (distance 2) when the root marks differ.
inline double local_distance(const RootedNeighborhood& a, const RootedNeighborhood& b) {
  if (a.radius != b.radius) throw Error(ErrorCode::InvalidArgument, "balls extracted to different radii");
  int r_max = -1;
  if (a.root_mark() == b.root_mark()) {
    r_max = 0;
    for (int r = 1; r <= a.radius; ++r) {
      if (canonical_key(truncate(a, r)) != canonical_key(truncate(b, r))) break;
      r_max = r;
    }
  }
  return std::ldexp(1.0, -r_max);
}

/// Census dump: `key_hex count` lines; the sidecar maps key_hex to a readable ball.
inline void write_census(std::ostream& out, const NeighborhoodCensus& c) {
  for (const auto& [k, n] : c.counts) out << key_hex(k) << ' ' << n << '\n';
}

inline void write_census_sidecar(std::ostream& out, const NeighborhoodCensus& c) {
  for (const auto& [k, nb] : c.representatives) out << key_hex(k) << ' ' << describe(nb) << '\n';
}

}  // namespace rigc
