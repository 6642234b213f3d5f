#pragma once

// Community projection: every edge {j1, j2} of every community is copied onto
// the individuals holding roles j1 and j2, giving edge multiplicities X(v,w)
// and self-loop counts X(v,v).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rigc/bcm.hpp"
#include "rigc/error.hpp"

namespace rigc {

struct Multiplicity {
  std::uint32_t v = 0;  // v < w
  std::uint32_t w = 0;
  std::uint32_t mult = 0;
  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
};

struct Neighbor {
  std::uint32_t w = 0;
  std::uint32_t mult = 0;
};

/// One projected edge instance and the community edge it was copied from.
struct EdgeInstance {
  std::uint32_t v = 0;
  std::uint32_t w = 0;
  std::uint32_t community = 0;
  int j1 = 0;
  int j2 = 0;
};

inline constexpr std::size_t kProvenanceHalfEdgeLimit = 1'000'000;

class ProjectedGraph {
 public:
  ProjectedGraph() = default;

  /// pairs: v < w, sorted and unique, positive multiplicities.
  ProjectedGraph(std::size_t n, std::vector<Multiplicity> pairs, std::vector<std::uint32_t> self_loops,
                 std::optional<std::vector<EdgeInstance>> provenance = std::nullopt)
      : n_(n), pairs_(std::move(pairs)), loops_(std::move(self_loops)), provenance_(std::move(provenance)) {
    if (loops_.empty()) loops_.assign(n_, 0);
    if (loops_.size() != n_) throw Error(ErrorCode::InvalidArgument, "self-loop table has wrong length");
    offset_.assign(n_ + 1, 0);
    for (const auto& p : pairs_) {
      if (p.v >= p.w || p.w >= n_ || p.mult == 0) throw Error(ErrorCode::InvalidArgument, "invalid multiplicity entry");
      ++offset_[p.v + 1];
      ++offset_[p.w + 1];
    }
    for (std::size_t v = 0; v < n_; ++v) offset_[v + 1] += offset_[v];
    adj_.resize(offset_[n_]);
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    for (const auto& p : pairs_) {
      adj_[fill[p.v]++] = {p.w, p.mult};
      adj_[fill[p.w]++] = {p.v, p.mult};
    }
    for (std::size_t v = 0; v < n_; ++v)
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offset_[v]),
                adj_.begin() + static_cast<std::ptrdiff_t>(offset_[v + 1]),
                [](const Neighbor& a, const Neighbor& b) { return a.w < b.w; });
  }

  std::size_t size() const { return n_; }
  const std::vector<Multiplicity>& pairs() const { return pairs_; }
  const std::vector<std::uint32_t>& self_loops() const { return loops_; }
  std::uint32_t self_loops(std::size_t v) const { return loops_[v]; }

  /// Neighbours w != v with X(v,w) >= 1, increasing in w.
  std::span<const Neighbor> neighbors(std::size_t v) const {
    return {adj_.data() + offset_[v], offset_[v + 1] - offset_[v]};
  }

  std::uint32_t multiplicity(std::size_t v, std::size_t w) const {
    if (v == w) return loops_[v];
    auto row = neighbors(v);
    auto it = std::lower_bound(row.begin(), row.end(), w, [](const Neighbor& a, std::size_t x) { return a.w < x; });
    return it != row.end() && it->w == w ? it->mult : 0;
  }

  /// p-deg(v) = 2 X(v,v) + sum_{w != v} X(v,w).
  std::uint64_t degree(std::size_t v) const {
    std::uint64_t d = 2 * static_cast<std::uint64_t>(loops_[v]);
    for (const auto& nb : neighbors(v)) d += nb.mult;
    return d;
  }

  std::vector<std::uint64_t> degrees() const {
    std::vector<std::uint64_t> out(n_);
    for (std::size_t v = 0; v < n_; ++v) out[v] = degree(v);
    return out;
  }

  /// Total number of projected edge instances, self-loops counted once.
  std::uint64_t edge_instances() const {
    std::uint64_t t = 0;
    for (const auto& p : pairs_) t += p.mult;
    for (auto x : loops_) t += x;
    return t;
  }

  std::uint64_t self_loop_total() const {
    std::uint64_t t = 0;
    for (auto x : loops_) t += x;
    return t;
  }

  /// Number of vertex pairs with X(v,w) >= 2.
  std::size_t multi_edge_pairs() const {
    std::size_t t = 0;
    for (const auto& p : pairs_) t += p.mult >= 2;
    return t;
  }

  bool is_simple() const { return self_loop_total() == 0 && multi_edge_pairs() == 0; }

  const std::optional<std::vector<EdgeInstance>>& provenance() const { return provenance_; }

  friend bool operator==(const ProjectedGraph& x, const ProjectedGraph& y) {
    return x.n_ == y.n_ && x.pairs_ == y.pairs_ && x.loops_ == y.loops_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Multiplicity> pairs_;
  std::vector<std::uint32_t> loops_;
  std::optional<std::vector<EdgeInstance>> provenance_;
  std::vector<std::size_t> offset_;
  std::vector<Neighbor> adj_;
};

inline ProjectedGraph make_projected(std::size_t n, std::vector<std::uint64_t> keys, std::vector<std::uint32_t> loops,
                                     std::optional<std::vector<EdgeInstance>> provenance = std::nullopt) {
  std::sort(keys.begin(), keys.end());
  std::vector<Multiplicity> pairs;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    pairs.push_back({static_cast<std::uint32_t>(keys[i] >> 32), static_cast<std::uint32_t>(keys[i] & 0xffffffffu),
                     static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return ProjectedGraph(n, std::move(pairs), std::move(loops), std::move(provenance));
}

inline std::uint64_t pair_key(std::uint32_t v, std::uint32_t w) {
  if (v > w) std::swap(v, w);
  return (static_cast<std::uint64_t>(v) << 32) | w;
}

/// Projects a matching; provenance defaults to on below 10^6 half-edges.
inline ProjectedGraph project(const BipartiteMatching& m, std::optional<bool> with_provenance = std::nullopt) {
  const bool prov = with_provenance.value_or(m.half_edges() < kProvenanceHalfEdgeLimit);
  const ModelParams& mp = m.params();
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> loops(m.l_count(), 0);
  std::vector<EdgeInstance> instances;
  std::size_t total = 0;
  for (std::size_t a = 0; a < mp.community_count(); ++a) total += mp.community(a).edge_count();
  keys.reserve(total);
  if (prov) instances.reserve(total);
  for (std::uint32_t a = 0; a < mp.community_count(); ++a) {
    for (auto [j1, j2] : mp.community(a).edges()) {
      const std::uint32_t v = m.holder(a, j1), w = m.holder(a, j2);
      if (v == w) ++loops[v];
      else keys.push_back(pair_key(v, w));
      if (prov) instances.push_back({v, w, a, j1, j2});
    }
  }
  return make_projected(m.l_count(), std::move(keys), std::move(loops),
                        prov ? std::optional<std::vector<EdgeInstance>>(std::move(instances)) : std::nullopt);
}

/// Erased RIGC: self-loops dropped, multi-edges collapsed.
inline ProjectedGraph erase(const ProjectedGraph& g) {
  std::vector<Multiplicity> pairs = g.pairs();
  for (auto& p : pairs) p.mult = 1;
  return ProjectedGraph(g.size(), std::move(pairs), std::vector<std::uint32_t>(g.size(), 0));
}

struct Membership {
  std::uint32_t community = 0;
  int role = 1;  // 1-based label in the community graph
};

/// Roles held by each individual, ordered by the individual's slot i.
class Memberships {
 public:
  explicit Memberships(const BipartiteMatching& m) : offset_(m.l_count() + 1, 0) {
    for (std::uint32_t v = 0; v < m.l_count(); ++v) offset_[v + 1] = m.l_end(v);
    roles_.resize(m.half_edges());
    for (HalfEdge k = 0; k < m.half_edges(); ++k) {
      const HalfEdge r = m.partner_of_l(k);
      roles_[k] = {m.r_owner(r), m.r_slot(r)};
    }
  }
  std::size_t size() const { return offset_.size() - 1; }
  std::span<const Membership> operator[](std::size_t v) const {
    return {roles_.data() + offset_[v], offset_[v + 1] - offset_[v]};
  }
  std::size_t total() const { return roles_.size(); }

 private:
  std::vector<std::size_t> offset_;
  std::vector<Membership> roles_;
};

inline Memberships memberships(const BipartiteMatching& m) { return Memberships(m); }

/// `v w mult` lines (1-based, v <= w); a line with v == w is a self-loop count.
inline void write_projected(std::ostream& out, const ProjectedGraph& g) {
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    if (g.self_loops(v)) out << v + 1 << ' ' << v + 1 << ' ' << g.self_loops(v) << '\n';
    for (const auto& nb : g.neighbors(v))
      if (nb.w > v) out << v + 1 << ' ' << nb.w + 1 << ' ' << nb.mult << '\n';
  }
}

inline ProjectedGraph read_projected(std::istream& in, std::size_t n) {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> loops(n, 0);
  std::vector<Multiplicity> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long v, w, mult;
    if (!(ls >> v >> w >> mult) || v < 1 || w < 1 || static_cast<std::size_t>(v) > n ||
        static_cast<std::size_t>(w) > n || mult < 1)
      throw Error(ErrorCode::Parse, "projected graph line " + std::to_string(lineno));
    if (v == w) loops[static_cast<std::size_t>(v - 1)] += static_cast<std::uint32_t>(mult);
    else
      for (long long c = 0; c < mult; ++c)
        keys.push_back(pair_key(static_cast<std::uint32_t>(v - 1), static_cast<std::uint32_t>(w - 1)));
  }
  return make_projected(n, std::move(keys), std::move(loops));
}

/// Erased graph as a plain `v w` edge list (1-based).
inline void write_edge_list(std::ostream& out, const ProjectedGraph& g) {
  for (const auto& p : g.pairs()) out << p.v + 1 << ' ' << p.w + 1 << '\n';
}

}  // namespace rigc
