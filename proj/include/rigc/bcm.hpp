#pragma once

// Uniform bipartite matching of l-half-edges (v,i) with r-half-edges (a,l),
// and the edge-labelled bipartite configuration model it induces.
//
// Half-edges are enumerated globally: l-half-edge (v,i) has index
// l_offset[v] + i - 1, r-half-edge (a,l) has index r_offset[a] + l - 1.
// An edge of the BCM is identified by its l-half-edge index.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rigc/error.hpp"
#include "rigc/params.hpp"
#include "rigc/random.hpp"

namespace rigc {

using HalfEdge = std::uint32_t;

enum class Side : std::uint8_t { L = 0, R = 1 };

struct HalfEdgeId {
  Side side = Side::L;
  std::uint32_t owner = 0;  // 0-based vertex index
  int slot = 1;             // 1-based
  friend bool operator==(const HalfEdgeId&, const HalfEdgeId&) = default;
};

class BipartiteMatching {
 public:
  /// Builds a matching from l_to_r[k] = r-half-edge paired with l-half-edge k.
  BipartiteMatching(ModelParams params, std::vector<HalfEdge> l_to_r) : params_(std::move(params)) {
    build_offsets();
    const std::size_t h = params_.half_edges();
    if (l_to_r.size() != h) throw Error(ErrorCode::InvalidArgument, "pairing has wrong length");
    r_to_l_.assign(h, kUnset);
    for (std::size_t k = 0; k < h; ++k) {
      const HalfEdge r = l_to_r[k];
      if (r >= h || r_to_l_[r] != kUnset) throw Error(ErrorCode::InvalidArgument, "pairing is not a bijection");
      r_to_l_[r] = static_cast<HalfEdge>(k);
    }
    l_to_r_ = std::move(l_to_r);
  }

  const ModelParams& params() const { return params_; }
  std::size_t half_edges() const { return l_to_r_.size(); }
  std::size_t l_count() const { return params_.individuals(); }
  std::size_t r_count() const { return params_.community_count(); }

  HalfEdge l_half_edge(std::uint32_t v, int i) const { return l_offset_[v] + static_cast<HalfEdge>(i - 1); }
  HalfEdge r_half_edge(std::uint32_t a, int l) const { return r_offset_[a] + static_cast<HalfEdge>(l - 1); }
  HalfEdge l_begin(std::uint32_t v) const { return l_offset_[v]; }
  HalfEdge l_end(std::uint32_t v) const { return l_offset_[v + 1]; }
  HalfEdge r_begin(std::uint32_t a) const { return r_offset_[a]; }
  HalfEdge r_end(std::uint32_t a) const { return r_offset_[a + 1]; }

  HalfEdge partner_of_l(HalfEdge k) const { return l_to_r_[k]; }
  HalfEdge partner_of_r(HalfEdge k) const { return r_to_l_[k]; }
  std::uint32_t l_owner(HalfEdge k) const { return l_owner_[k]; }
  std::uint32_t r_owner(HalfEdge k) const { return r_owner_[k]; }
  int l_slot(HalfEdge k) const { return static_cast<int>(k - l_offset_[l_owner_[k]]) + 1; }
  int r_slot(HalfEdge k) const { return static_cast<int>(k - r_offset_[r_owner_[k]]) + 1; }

  /// Individual holding role l of community a.
  std::uint32_t holder(std::uint32_t a, int l) const { return l_owner_[r_to_l_[r_half_edge(a, l)]]; }

  HalfEdgeId partner(const HalfEdgeId& e) const {
    if (e.side == Side::L) {
      const HalfEdge r = l_to_r_[l_half_edge(e.owner, e.slot)];
      return {Side::R, r_owner_[r], r_slot(r)};
    }
    const HalfEdge k = r_to_l_[r_half_edge(e.owner, e.slot)];
    return {Side::L, l_owner_[k], l_slot(k)};
  }

  const std::vector<HalfEdge>& l_to_r() const { return l_to_r_; }
  const std::vector<HalfEdge>& r_to_l() const { return r_to_l_; }

  friend bool operator==(const BipartiteMatching& x, const BipartiteMatching& y) {
    return x.params_.l_degrees() == y.params_.l_degrees() &&
           x.params_.communities() == y.params_.communities() && x.l_to_r_ == y.l_to_r_;
  }

 private:
  static constexpr HalfEdge kUnset = ~HalfEdge{0};

  void build_offsets() {
    const std::size_t n = params_.individuals(), m = params_.community_count();
    l_offset_.resize(n + 1);
    r_offset_.resize(m + 1);
    l_offset_[0] = r_offset_[0] = 0;
    for (std::size_t v = 0; v < n; ++v) l_offset_[v + 1] = l_offset_[v] + static_cast<HalfEdge>(params_.l_degree(v));
    for (std::size_t a = 0; a < m; ++a) r_offset_[a + 1] = r_offset_[a] + static_cast<HalfEdge>(params_.r_degree(a));
    l_owner_.resize(l_offset_[n]);
    r_owner_.resize(r_offset_[m]);
    for (std::size_t v = 0; v < n; ++v)
      std::fill(l_owner_.begin() + l_offset_[v], l_owner_.begin() + l_offset_[v + 1], static_cast<std::uint32_t>(v));
    for (std::size_t a = 0; a < m; ++a)
      std::fill(r_owner_.begin() + r_offset_[a], r_owner_.begin() + r_offset_[a + 1], static_cast<std::uint32_t>(a));
  }

  ModelParams params_;
  std::vector<HalfEdge> l_offset_, r_offset_;
  std::vector<std::uint32_t> l_owner_, r_owner_;
  std::vector<HalfEdge> l_to_r_, r_to_l_;
};

/// Pairs l-half-edges in index order, each with a uniformly chosen unpaired
/// r-half-edge (in-place Fisher-Yates over the r-half-edge pool).
inline BipartiteMatching sample_uniform_matching(const ModelParams& params, Rng& rng) {
  const std::size_t h = params.half_edges();
  if (h > std::size_t{0xfffffffe}) throw Error(ErrorCode::InvalidArgument, "too many half-edges");
  std::vector<HalfEdge> pool(h);
  std::iota(pool.begin(), pool.end(), HalfEdge{0});
  for (std::size_t k = 0; k + 1 < h; ++k) {
    const std::size_t j = k + uniform_below<std::size_t>(rng, h - k);
    std::swap(pool[k], pool[j]);
  }
  return BipartiteMatching(params, std::move(pool));
}

inline BipartiteMatching sample_uniform_matching(const ModelParams& params, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_uniform_matching(params, rng);
}

/// BCM edge v - a with label (i, l); v, a are 0-based, i, l are 1-based.
struct BcmEdge {
  std::uint32_t v = 0;
  std::uint32_t a = 0;
  int i = 1;
  int l = 1;
  friend bool operator==(const BcmEdge&, const BcmEdge&) = default;
};

/// Bipartite multigraph view: every edge with its label, listed in l-half-edge order.
struct BcmAdjacency {
  std::size_t l_count = 0;
  std::size_t r_count = 0;
  std::vector<BcmEdge> edges;
  std::vector<int> l_degree;
  std::vector<int> r_degree;
};

inline BcmAdjacency bcm_adjacency(const BipartiteMatching& m) {
  BcmAdjacency out;
  out.l_count = m.l_count();
  out.r_count = m.r_count();
  out.l_degree.assign(out.l_count, 0);
  out.r_degree.assign(out.r_count, 0);
  out.edges.reserve(m.half_edges());
  for (HalfEdge k = 0; k < m.half_edges(); ++k) {
    const HalfEdge r = m.partner_of_l(k);
    BcmEdge e{m.l_owner(k), m.r_owner(r), m.l_slot(k), m.r_slot(r)};
    ++out.l_degree[e.v];
    ++out.r_degree[e.a];
    out.edges.push_back(e);
  }
  return out;
}

/// A vertex of the BCM: side plus 0-based index.
struct BcmNode {
  Side side = Side::L;
  std::uint32_t index = 0;
  friend bool operator==(const BcmNode&, const BcmNode&) = default;
};

struct BcmNeighbor {
  BcmNode node;
  HalfEdge edge = 0;  // l-half-edge index identifying the edge
  int i = 1;
  int l = 1;
};

/// Neighbours of `node` with multiplicity: an l-vertex orders them by the
/// l-slot i, an r-vertex by the r-slot l. The edge `parent` is skipped.
inline std::vector<BcmNeighbor> ordered_children(const BipartiteMatching& m, BcmNode node,
                                                 std::optional<HalfEdge> parent = std::nullopt) {
  std::vector<BcmNeighbor> out;
  if (node.side == Side::L) {
    for (HalfEdge k = m.l_begin(node.index); k < m.l_end(node.index); ++k) {
      if (parent && *parent == k) continue;
      const HalfEdge r = m.partner_of_l(k);
      out.push_back({{Side::R, m.r_owner(r)}, k, m.l_slot(k), m.r_slot(r)});
    }
  } else {
    for (HalfEdge r = m.r_begin(node.index); r < m.r_end(node.index); ++r) {
      const HalfEdge k = m.partner_of_r(r);
      if (parent && *parent == k) continue;
      out.push_back({{Side::L, m.l_owner(k)}, k, m.l_slot(k), m.r_slot(r)});
    }
  }
  return out;
}

/// Writes one line `v a i l` (all 1-based) per edge, in l-half-edge order.
inline void write_matching(std::ostream& out, const BipartiteMatching& m) {
  for (HalfEdge k = 0; k < m.half_edges(); ++k) {
    const HalfEdge r = m.partner_of_l(k);
    out << m.l_owner(k) + 1 << ' ' << m.r_owner(r) + 1 << ' ' << m.l_slot(k) << ' ' << m.r_slot(r) << '\n';
  }
}

/// Reads the `v a i l` edge list back against known parameters.
inline BipartiteMatching read_matching(std::istream& in, const ModelParams& params) {
  const std::size_t h = params.half_edges();
  std::vector<HalfEdge> l_off(params.individuals() + 1, 0), r_off(params.community_count() + 1, 0);
  for (std::size_t v = 0; v < params.individuals(); ++v) l_off[v + 1] = l_off[v] + params.l_degree(v);
  for (std::size_t a = 0; a < params.community_count(); ++a) r_off[a + 1] = r_off[a] + params.r_degree(a);
  std::vector<HalfEdge> l_to_r(h, ~HalfEdge{0});
  std::string line;
  std::size_t count = 0, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long v, a, i, l;
    if (!(ls >> v >> a >> i >> l)) throw Error(ErrorCode::Parse, "matching line " + std::to_string(lineno));
    if (v < 1 || a < 1 || static_cast<std::size_t>(v) > params.individuals() ||
        static_cast<std::size_t>(a) > params.community_count() || i < 1 || l < 1 ||
        i > params.l_degree(static_cast<std::size_t>(v - 1)) || l > params.r_degree(static_cast<std::size_t>(a - 1)))
      throw Error(ErrorCode::Parse, "matching line " + std::to_string(lineno) + ": label out of range");
    const HalfEdge k = l_off[static_cast<std::size_t>(v - 1)] + static_cast<HalfEdge>(i - 1);
    if (l_to_r[k] != ~HalfEdge{0}) throw Error(ErrorCode::Parse, "l-half-edge paired twice");
    l_to_r[k] = r_off[static_cast<std::size_t>(a - 1)] + static_cast<HalfEdge>(l - 1);
    ++count;
  }
  if (count != h) throw Error(ErrorCode::Parse, "matching lists " + std::to_string(count) + " of " + std::to_string(h) + " edges");
  return BipartiteMatching(params, std::move(l_to_r));
}

}  // namespace rigc
