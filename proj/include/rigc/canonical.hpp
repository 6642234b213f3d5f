#pragma once

// Exact canonical labeling for small vertex- and edge-colored multigraphs.
//
// General graphs go through colour refinement plus individualization with
// automorphism pruning. The certificate is the adjacency structure written in
// canonical vertex order together with the raw colours and edge marks, so two
// inputs get equal certificates iff they are isomorphic (colour-preserving).
// Rooted trees without parallel edges take the AHU route instead.

#include <algorithm>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace rigc::canon {

struct Edge {
  int u = 0;
  int v = 0;
  std::int64_t mark = 0;
};

struct ColoredGraph {
  int n = 0;
  std::vector<std::int64_t> color;  // initial vertex invariant, one per vertex
  std::vector<Edge> edges;          // parallel edges and self-loops allowed
};

struct CanonicalLabeling {
  std::vector<int> order;                  // order[k] = input vertex placed at position k
  std::vector<std::int64_t> certificate;   // equal iff isomorphic
};

/// Appends a zigzag varint encoding of the tokens to out.
inline void append_varints(std::string& out, const std::vector<std::int64_t>& tokens) {
  for (std::int64_t t : tokens) {
    auto z = (static_cast<std::uint64_t>(t) << 1) ^ static_cast<std::uint64_t>(t >> 63);
    do {
      unsigned char byte = z & 0x7f;
      z >>= 7;
      if (z) byte |= 0x80;
      out.push_back(static_cast<char>(byte));
    } while (z);
  }
}

namespace detail {

using Label = std::vector<std::int64_t>;  // sorted marks of a bundle of parallel edges

struct Prepared {
  int n = 0;
  std::vector<std::int64_t> color;
  std::vector<Label> labels;                          // distinct bundle labels, sorted
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, label id), neighbour != v
  std::vector<int> loop;                              // label id of self-loop bundle or -1
};

inline Prepared prepare(const ColoredGraph& g) {
  Prepared p;
  p.n = g.n;
  p.color = g.color;
  if (static_cast<int>(p.color.size()) != g.n) p.color.resize(static_cast<std::size_t>(g.n), 0);

  // bundle parallel edges per unordered pair
  std::vector<std::pair<std::pair<int, int>, std::int64_t>> ends;
  ends.reserve(g.edges.size());
  for (const Edge& e : g.edges) ends.push_back({{std::min(e.u, e.v), std::max(e.u, e.v)}, e.mark});
  std::sort(ends.begin(), ends.end());

  std::vector<std::pair<std::pair<int, int>, Label>> bundles;
  for (std::size_t i = 0; i < ends.size();) {
    std::size_t j = i;
    Label lab;
    while (j < ends.size() && ends[j].first == ends[i].first) lab.push_back(ends[j++].second);
    bundles.push_back({ends[i].first, std::move(lab)});
    i = j;
  }
  for (const auto& b : bundles) p.labels.push_back(b.second);
  std::sort(p.labels.begin(), p.labels.end());
  p.labels.erase(std::unique(p.labels.begin(), p.labels.end()), p.labels.end());

  p.adj.assign(static_cast<std::size_t>(g.n), {});
  p.loop.assign(static_cast<std::size_t>(g.n), -1);
  for (const auto& [pair, lab] : bundles) {
    const int id = static_cast<int>(std::lower_bound(p.labels.begin(), p.labels.end(), lab) - p.labels.begin());
    if (pair.first == pair.second) {
      p.loop[static_cast<std::size_t>(pair.first)] = id;
    } else {
      p.adj[static_cast<std::size_t>(pair.first)].push_back({pair.second, id});
      p.adj[static_cast<std::size_t>(pair.second)].push_back({pair.first, id});
    }
  }
  return p;
}

/// Re-ranks vertices by key; returns number of distinct keys.
template <typename Key>
int rank_by(const std::vector<Key>& keys, std::vector<int>& colors) {
  const std::size_t n = keys.size();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  colors.assign(n, 0);
  int rank = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<std::size_t>(idx[i]);
    if (i == 0 || keys[static_cast<std::size_t>(idx[i - 1])] != keys[v]) ++rank;
    colors[v] = rank;
  }
  return rank + 1;
}

inline int initial_colors(const Prepared& p, std::vector<int>& colors) {
  std::vector<std::pair<std::int64_t, int>> keys(static_cast<std::size_t>(p.n));
  for (int v = 0; v < p.n; ++v) keys[static_cast<std::size_t>(v)] = {p.color[static_cast<std::size_t>(v)], p.loop[static_cast<std::size_t>(v)]};
  return rank_by(keys, colors);
}

/// 1-dimensional Weisfeiler-Leman refinement to the coarsest equitable partition.
inline int refine(const Prepared& p, std::vector<int>& colors, int ncolors) {
  const auto nl = static_cast<std::int64_t>(p.labels.size()) + 1;
  std::vector<std::vector<std::int64_t>> keys(static_cast<std::size_t>(p.n));
  while (true) {
    for (int v = 0; v < p.n; ++v) {
      auto& k = keys[static_cast<std::size_t>(v)];
      k.clear();
      k.push_back(colors[static_cast<std::size_t>(v)]);
      for (const auto& [w, lab] : p.adj[static_cast<std::size_t>(v)])
        k.push_back(static_cast<std::int64_t>(colors[static_cast<std::size_t>(w)]) * nl + lab);
      std::sort(k.begin() + 1, k.end());
    }
    const int next = rank_by(keys, colors);
    if (next == ncolors) return next;
    ncolors = next;
  }
}

class Searcher {
 public:
  explicit Searcher(const Prepared& p) : p_(p) {}

  CanonicalLabeling run() {
    std::vector<int> colors;
    int nc = initial_colors(p_, colors);
    nc = refine(p_, colors, nc);
    std::vector<int> path;
    search(colors, nc, path);
    return {best_order_, best_cert_};
  }

 private:
  static constexpr int kNone = INT_MAX;

  const Prepared& p_;
  bool have_leaf_ = false;
  std::vector<std::int64_t> best_cert_, first_cert_;
  std::vector<int> best_order_, first_order_, best_path_, first_path_;
  std::vector<std::vector<int>> autos_;

  std::vector<std::int64_t> certificate(const std::vector<int>& order) const {
    const int n = p_.n;
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
    std::vector<std::int64_t> cert;
    cert.push_back(n);
    std::vector<std::pair<int, int>> nb;
    for (int k = 0; k < n; ++k) {
      const auto v = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
      cert.push_back(p_.color[v]);
      if (p_.loop[v] >= 0) {
        const Label& lab = p_.labels[static_cast<std::size_t>(p_.loop[v])];
        cert.push_back(static_cast<std::int64_t>(lab.size()));
        cert.insert(cert.end(), lab.begin(), lab.end());
      } else {
        cert.push_back(0);
      }
      nb.clear();
      for (const auto& [w, lab] : p_.adj[v])
        if (pos[static_cast<std::size_t>(w)] > k) nb.push_back({pos[static_cast<std::size_t>(w)], lab});
      std::sort(nb.begin(), nb.end());
      cert.push_back(static_cast<std::int64_t>(nb.size()));
      for (const auto& [w, lab] : nb) {
        const Label& l = p_.labels[static_cast<std::size_t>(lab)];
        cert.push_back(w);
        cert.push_back(static_cast<std::int64_t>(l.size()));
        cert.insert(cert.end(), l.begin(), l.end());
      }
    }
    return cert;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return static_cast<int>(i);
  }

  void record_auto(const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> gamma(static_cast<std::size_t>(p_.n));
    for (std::size_t k = 0; k < from.size(); ++k) gamma[static_cast<std::size_t>(from[k])] = to[k];
    autos_.push_back(std::move(gamma));
  }

  int leaf(const std::vector<int>& colors, const std::vector<int>& path) {
    std::vector<int> order(static_cast<std::size_t>(p_.n));
    for (int v = 0; v < p_.n; ++v) order[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])] = v;
    auto cert = certificate(order);
    if (!have_leaf_) {
      have_leaf_ = true;
      best_cert_ = first_cert_ = std::move(cert);
      best_order_ = first_order_ = order;
      best_path_ = first_path_ = path;
      return kNone;
    }
    if (cert == first_cert_) {
      record_auto(first_order_, order);
      return common_prefix(path, first_path_);
    }
    if (cert == best_cert_) {
      record_auto(best_order_, order);
      return common_prefix(path, best_path_);
    }
    if (cert < best_cert_) {
      best_cert_ = std::move(cert);
      best_order_ = std::move(order);
      best_path_ = path;
    }
    return kNone;
  }

  int find(std::vector<int>& parent, int x) const {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }

  // Orbits of the group generated by the known automorphisms that fix path pointwise.
  std::vector<int> orbits(const std::vector<int>& path) {
    std::vector<int> parent(static_cast<std::size_t>(p_.n));
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& g : autos_) {
      bool fixes = true;
      for (int x : path)
        if (g[static_cast<std::size_t>(x)] != x) { fixes = false; break; }
      if (!fixes) continue;
      for (int v = 0; v < p_.n; ++v) {
        const int a = find(parent, v), b = find(parent, g[static_cast<std::size_t>(v)]);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    for (int v = 0; v < p_.n; ++v) parent[static_cast<std::size_t>(v)] = find(parent, v);
    return parent;
  }

  int search(const std::vector<int>& colors, int ncolors, std::vector<int>& path) {
    if (ncolors == p_.n) return leaf(colors, path);

    std::vector<int> cell_size(static_cast<std::size_t>(ncolors), 0);
    for (int c : colors) ++cell_size[static_cast<std::size_t>(c)];
    int target = -1;
    for (int c = 0; c < ncolors; ++c)
      if (cell_size[static_cast<std::size_t>(c)] > 1 &&
          (target < 0 || cell_size[static_cast<std::size_t>(c)] < cell_size[static_cast<std::size_t>(target)]))
        target = c;

    const int depth = static_cast<int>(path.size());
    std::vector<int> explored;
    std::size_t autos_seen = 0;
    std::vector<int> orbit;
    for (int x = 0; x < p_.n; ++x) {
      if (colors[static_cast<std::size_t>(x)] != target) continue;
      if (!explored.empty()) {
        if (autos_seen != autos_.size()) {
          orbit = orbits(path);
          autos_seen = autos_.size();
        }
        bool same = false;
        for (int e : explored)
          if (!orbit.empty() && orbit[static_cast<std::size_t>(e)] == orbit[static_cast<std::size_t>(x)]) { same = true; break; }
        if (same) continue;
      }
      explored.push_back(x);

      std::vector<std::int64_t> keys(static_cast<std::size_t>(p_.n));
      for (int v = 0; v < p_.n; ++v)
        keys[static_cast<std::size_t>(v)] = 2 * static_cast<std::int64_t>(colors[static_cast<std::size_t>(v)]) +
                                            (colors[static_cast<std::size_t>(v)] == target && v != x ? 1 : 0);
      std::vector<int> next;
      int nc = rank_by(keys, next);
      nc = refine(p_, next, nc);

      path.push_back(x);
      const int r = search(next, nc, path);
      path.pop_back();
      if (r != kNone && r < depth) return r;
    }
    return kNone;
  }
};

}  // namespace detail

inline CanonicalLabeling canonical_labeling(const ColoredGraph& g) {
  if (g.n == 0) return {{}, {0}};
  const detail::Prepared p = detail::prepare(g);
  detail::Searcher s(p);
  return s.run();
}

/// Rooted tree given as parent array (root has parent -1), vertex colours and
/// the mark of the edge to the parent. Returns the AHU token string.
inline std::vector<std::int64_t> ahu_tokens(const std::vector<int>& parent,
                                            const std::vector<std::int64_t>& color,
                                            const std::vector<std::int64_t>& parent_mark) {
  const std::size_t n = parent.size();
  std::vector<std::vector<int>> children(n);
  int root = -1;
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] < 0) root = static_cast<int>(v);
    else children[static_cast<std::size_t>(parent[v])].push_back(static_cast<int>(v));
  }
  // post-order without recursion
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : children[static_cast<std::size_t>(v)]) stack.push_back(c);
  }
  std::vector<std::vector<std::int64_t>> enc(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = static_cast<std::size_t>(*it);
    auto& kids = children[v];
    std::sort(kids.begin(), kids.end(), [&](int a, int b) { return enc[static_cast<std::size_t>(a)] < enc[static_cast<std::size_t>(b)]; });
    auto& e = enc[v];
    e.push_back(-1);  // open
    e.push_back(color[v]);
    e.push_back(parent_mark[v]);
    for (int c : kids) {
      auto& ce = enc[static_cast<std::size_t>(c)];
      e.insert(e.end(), ce.begin(), ce.end());
      ce.clear();
      ce.shrink_to_fit();
    }
    e.push_back(-2);  // close
  }
  return enc[static_cast<std::size_t>(root)];
}

}  // namespace rigc::canon
