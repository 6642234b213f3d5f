#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rigc/canonical.hpp"
#include "rigc/error.hpp"

namespace rigc {

inline constexpr int kDefaultMaxCommunitySize = 64;

class CommunityGraph;
inline CommunityGraph canonicalize(int n, const std::vector<std::pair<int, int>>& edges,
                            int max_size = kDefaultMaxCommunitySize);

/// A connected simple graph with labels 1..size() in canonical order.
/// Isomorphic inputs produce identical objects.
class CommunityGraph {
 public:
  CommunityGraph() = default;

  int size() const { return size_; }
  /// Edges as (a, b) with 1 <= a < b <= size(), sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& canonical_id() const { return id_; }

  bool has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), std::pair{a, b});
  }

  friend bool operator==(const CommunityGraph& x, const CommunityGraph& y) { return x.id_ == y.id_; }
  friend bool operator<(const CommunityGraph& x, const CommunityGraph& y) {
    return std::tie(x.size_, x.id_) < std::tie(y.size_, y.id_);
  }

 private:
  friend CommunityGraph canonicalize(int, const std::vector<std::pair<int, int>>&, int);

  int size_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::string id_;
};

namespace detail {

inline std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

}  // namespace detail

/// Canonicalizes a graph on vertices 0..n-1 given as an edge list.
inline CommunityGraph canonicalize(int n, const std::vector<std::pair<int, int>>& edges, int max_size) {
  if (n <= 0) throw Error(ErrorCode::EmptyCommunity, "community graph has no vertices");
  if (n > max_size)
    throw Error(ErrorCode::CommunityTooLarge,
                "community of size " + std::to_string(n) + " exceeds cap " + std::to_string(max_size));
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (a == b) throw Error(ErrorCode::NonSimpleCommunity, "self-loop at vertex " + std::to_string(a));
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw Error(ErrorCode::NonSimpleCommunity, "repeated edge");
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<char> reached(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  reached[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!reached[static_cast<std::size_t>(w)]) {
        reached[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != n) throw Error(ErrorCode::DisconnectedCommunity, "community graph is not connected");

  canon::ColoredGraph g;
  g.n = n;
  g.color.assign(static_cast<std::size_t>(n), 0);
  for (auto [a, b] : seen) g.edges.push_back({a, b, 0});
  const canon::CanonicalLabeling lab = canon::canonical_labeling(g);

  std::vector<int> label(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) label[static_cast<std::size_t>(lab.order[static_cast<std::size_t>(k)])] = k + 1;

  CommunityGraph out;
  out.size_ = n;
  for (auto [a, b] : seen) {
    int x = label[static_cast<std::size_t>(a)], y = label[static_cast<std::size_t>(b)];
    out.edges_.push_back({std::min(x, y), std::max(x, y)});
  }
  std::sort(out.edges_.begin(), out.edges_.end());
  std::string bytes;
  canon::append_varints(bytes, lab.certificate);
  out.id_ = "c" + std::to_string(n) + "-" + detail::to_hex(bytes);
  return out;
}

/// Canonicalizes a graph with arbitrary vertex names. Isolated vertices must
/// be listed in `vertices`; names appearing only in edges are added.
inline CommunityGraph canonicalize_named(const std::vector<std::string>& vertices,
                                   const std::vector<std::pair<std::string, std::string>>& edges,
                                   int max_size = kDefaultMaxCommunitySize) {
  std::map<std::string, int> index;
  auto id = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<int>(index.size()));
    return it->second;
  };
  for (const auto& v : vertices) id(v);
  std::vector<std::pair<int, int>> e;
  for (const auto& [a, b] : edges) e.push_back({id(a), id(b)});
  return canonicalize(static_cast<int>(index.size()), e, max_size);
}

/// Re-canonicalizes an already canonical graph (1-based labels); used by parsers.
inline CommunityGraph canonicalize_one_based(int n, const std::vector<std::pair<int, int>>& edges,
                                             int max_size = kDefaultMaxCommunitySize) {
  std::vector<std::pair<int, int>> e;
  e.reserve(edges.size());
  for (auto [a, b] : edges) e.push_back({a - 1, b - 1});
  return canonicalize(n, e, max_size);
}

// Frequently used graphs.
inline CommunityGraph complete_graph(int k) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) e.push_back({a, b});
  return canonicalize(k, e);
}
inline CommunityGraph path_graph(int k) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a + 1 < k; ++a) e.push_back({a, a + 1});
  return canonicalize(k, e);
}
inline CommunityGraph star_graph(int k) {
  std::vector<std::pair<int, int>> e;
  for (int a = 1; a < k; ++a) e.push_back({0, a});
  return canonicalize(k, e);
}
inline CommunityGraph cycle_graph(int k) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < k; ++a) e.push_back({a, (a + 1) % k});
  return canonicalize(k, e);
}

/// Per-role community degree and triangle count.
struct RoleStat {
  int c_degree = 0;
  int triangles = 0;
  friend auto operator<=>(const RoleStat&, const RoleStat&) = default;
};

/// Indexed by label - 1.
using RoleStats = std::vector<RoleStat>;

inline RoleStats role_stats(const CommunityGraph& h) {
  const int n = h.size();
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [a, b] : h.edges()) {
    adj[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] = 1;
    adj[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] = 1;
  }
  RoleStats out(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto& s = out[static_cast<std::size_t>(v)];
    for (int w = 0; w < n; ++w) s.c_degree += adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(a)] &&
            adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(b)] &&
            adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
          ++s.triangles;
  }
  return out;
}

inline bool contains_triangle(const CommunityGraph& h) {
  for (const auto& s : role_stats(h))
    if (s.triangles > 0) return true;
  return false;
}

/// Probability law over community graphs plus the derived size law.
struct CommunityMeasure {
  std::map<std::string, double> weights;        // canonical id -> probability
  std::map<std::string, CommunityGraph> graphs;  // canonical id -> graph
  std::map<int, double> q;                      // size -> probability

  double weight(const CommunityGraph& h) const {
    auto it = weights.find(h.canonical_id());
    return it == weights.end() ? 0.0 : it->second;
  }
};

inline CommunityMeasure make_measure(const std::vector<std::pair<CommunityGraph, double>>& entries) {
  CommunityMeasure m;
  double total = 0.0;
  for (const auto& [h, w] : entries) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidMeasure, "negative community weight");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidMeasure, "community measure has zero mass");
  // accumulate raw weights first so equal entries normalize exactly
  std::map<int, double> size_mass;
  for (const auto& [h, w] : entries) {
    if (w == 0.0) continue;
    m.weights[h.canonical_id()] += w;
    m.graphs.emplace(h.canonical_id(), h);
    size_mass[h.size()] += w;
  }
  for (auto& [id, w] : m.weights) w /= total;
  for (const auto& [k, w] : size_mass) m.q[k] = w / total;
  return m;
}

inline CommunityMeasure empirical_community_measure(const std::vector<CommunityGraph>& com) {
  if (com.empty()) throw Error(ErrorCode::Empty, "empty community list");
  std::vector<std::pair<CommunityGraph, double>> entries;
  entries.reserve(com.size());
  for (const auto& h : com) entries.push_back({h, 1.0});
  return make_measure(entries);
}

using RoleMeasure = std::map<std::pair<int, int>, double>;  // (c_degree, triangles) -> probability

/// Role-weighted law of (c-degree, triangle count) under a community measure:
/// each community contributes its |H| roles, normalized by the mean size.
inline RoleMeasure role_measure(const CommunityMeasure& mu) {
  RoleMeasure rho;
  double mean_size = 0.0;
  for (const auto& [id, w] : mu.weights) {
    const CommunityGraph& h = mu.graphs.at(id);
    mean_size += w * h.size();
    for (const auto& s : role_stats(h)) rho[{s.c_degree, s.triangles}] += w;
  }
  for (auto& [k, v] : rho) v /= mean_size;
  return rho;
}

inline RoleMeasure role_measure(const std::vector<CommunityGraph>& com) {
  if (com.empty()) throw Error(ErrorCode::Empty, "empty community list");
  RoleMeasure rho;
  std::size_t h = 0;
  for (const auto& g : com) {
    h += static_cast<std::size_t>(g.size());
    for (const auto& s : role_stats(g)) rho[{s.c_degree, s.triangles}] += 1.0;
  }
  for (auto& [k, v] : rho) v /= static_cast<double>(h);
  return rho;
}

/// Named community graphs with weights, as read from a catalog file.
struct CatalogEntry {
  std::string name;
  CommunityGraph graph;
  double weight = 0.0;
};

class Catalog {
 public:
  Catalog() = default;

  /// Adds an entry; names must be unique. Returns its index.
  std::size_t add(std::string name, CommunityGraph graph, double weight = 0.0) {
    if (by_name_.count(name)) throw Error(ErrorCode::InvalidArgument, "duplicate catalog name " + name);
    by_name_[name] = entries_.size();
    entries_.push_back({std::move(name), std::move(graph), weight});
    return entries_.size() - 1;
  }

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const CatalogEntry& operator[](std::size_t i) const { return entries_[i]; }

  std::size_t index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw Error(ErrorCode::InvalidArgument, "unknown community name " + name);
    return it->second;
  }
  bool contains(const std::string& name) const { return by_name_.count(name) != 0; }

  CommunityMeasure measure() const {
    std::vector<std::pair<CommunityGraph, double>> e;
    for (const auto& c : entries_) e.push_back({c.graph, c.weight});
    return make_measure(e);
  }

 private:
  std::vector<CatalogEntry> entries_;
  std::map<std::string, std::size_t> by_name_;
};

// Catalog text format, one community per line:
//
//   <name> <weight> <size> [a-b ...]
//
// Vertex labels are 1-based. '#' starts a comment. Graphs are canonicalized
// on read, so any labeling of the same graph is accepted.
inline Catalog read_catalog(std::istream& in, int max_size = kDefaultMaxCommunitySize) {
  Catalog cat;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    double weight = 0.0;
    int size = 0;
    if (!(ls >> weight >> size))
      throw Error(ErrorCode::Parse, "catalog line " + std::to_string(lineno) + ": expected <name> <weight> <size>");
    std::vector<std::pair<int, int>> edges;
    std::string tok;
    while (ls >> tok) {
      auto dash = tok.find('-');
      if (dash == std::string::npos)
        throw Error(ErrorCode::Parse, "catalog line " + std::to_string(lineno) + ": bad edge '" + tok + "'");
      try {
        edges.push_back({std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1))});
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "catalog line " + std::to_string(lineno) + ": bad edge '" + tok + "'");
      }
    }
    cat.add(name, canonicalize_one_based(size, edges, max_size), weight);
  }
  return cat;
}

inline Catalog read_catalog_file(const std::string& path, int max_size = kDefaultMaxCommunitySize) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open catalog " + path);
  return read_catalog(in, max_size);
}

inline void write_catalog(std::ostream& out, const Catalog& cat) {
  out << "# name weight size edges\n";
  for (const auto& e : cat.entries()) {
    out << e.name << ' ' << std::setprecision(std::numeric_limits<double>::max_digits10) << e.weight << ' '
        << e.graph.size();
    for (auto [a, b] : e.graph.edges()) out << ' ' << a << '-' << b;
    out << '\n';
  }
}

}  // namespace rigc
