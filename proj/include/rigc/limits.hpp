#pragma once

// Limiting objects: the alternating branching processes BP_l, BP_r, BP_s and
// their exact ordered-tree probabilities, the projected limit CP built from a
// community-marked BP_l, and the laws of D^p and zeta.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigc/census.hpp"
#include "rigc/error.hpp"
#include "rigc/params.hpp"
#include "rigc/projection.hpp"
#include "rigc/random.hpp"
#include "rigc/stats.hpp"

namespace rigc {

enum class BpRoot { L, R, Mixed };

struct BpNode {
  int parent = -1;
  int depth = 0;
  Side side = Side::L;
  std::vector<int> children;  // Ulam-Harris order
  // community marks, r-nodes of a CP tree only
  int community = -1;          // index into LimitSpec::types()
  int parent_slot = 0;         // K, the role taken by the parent individual
  std::vector<int> child_slots;
};

/// Ordered rooted tree; node 0 is the root and nodes are stored in BFS order.
struct BpTree {
  int radius = 0;
  std::vector<BpNode> nodes;

  std::size_t size() const { return nodes.size(); }
  Side root_side() const { return nodes.front().side; }

  int add_child(int parent) {
    BpNode c;
    c.parent = parent;
    c.depth = nodes[static_cast<std::size_t>(parent)].depth + 1;
    c.side = nodes[static_cast<std::size_t>(parent)].side == Side::L ? Side::R : Side::L;
    nodes.push_back(c);
    const int id = static_cast<int>(nodes.size()) - 1;
    nodes[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
  }

  static BpTree single(Side side, int radius) {
    BpTree t;
    t.radius = radius;
    BpNode root;
    root.side = side;
    t.nodes.push_back(root);
    return t;
  }
};

inline Side draw_root_side(const LimitSpec& spec, BpRoot root, Rng& rng) {
  if (root == BpRoot::L) return Side::L;
  if (root == BpRoot::R) return Side::R;
  return uniform_unit(rng) < 1.0 / (1.0 + spec.gamma()) ? Side::L : Side::R;
}

/// Exact BP sample truncated at generation r: the root has D^l (or D^r)
/// children, later l- and r-nodes have D~^l and D~^r children.
inline BpTree sample_bp(const LimitSpec& spec, BpRoot root, int r, Rng& rng) {
  BpTree t = BpTree::single(draw_root_side(spec, root, rng), r);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (t.nodes[i].depth >= r) continue;
    const bool is_l = t.nodes[i].side == Side::L;
    const Pmf& law = i == 0 ? (is_l ? spec.p() : spec.q()) : (is_l ? spec.p_tilde() : spec.q_tilde());
    const int c = law.sample(rng);
    for (int k = 0; k < c; ++k) t.add_child(static_cast<int>(i));
  }
  return t;
}

inline BpTree sample_bp(const LimitSpec& spec, BpRoot root, int r, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_bp(spec, root, r, rng);
}

/// Probability of an ordered, side-marked tree of depth <= r under BP_s:
/// side prior times the root offspring probability times, for every other
/// node strictly inside generation r, the size-biased factor
/// d(v) q_{d(v)} / E[D^r] (r-nodes) or d(v) p_{d(v)} / E[D^l] (l-nodes).
inline double bp_tree_probability(const LimitSpec& spec, const BpTree& t, int r) {
  if (t.nodes.empty() || t.nodes[0].parent != -1) throw Error(ErrorCode::InvalidTree, "tree has no root");
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const BpNode& v = t.nodes[i];
    if (v.depth > r) throw Error(ErrorCode::InvalidTree, "tree deeper than radius");
    if (v.depth == r && !v.children.empty()) throw Error(ErrorCode::InvalidTree, "children below the truncation radius");
    for (int c : v.children) {
      const BpNode& w = t.nodes[static_cast<std::size_t>(c)];
      if (w.side == v.side || w.parent != static_cast<int>(i) || w.depth != v.depth + 1)
        throw Error(ErrorCode::InvalidTree, "marks do not alternate along an edge");
    }
  }
  const bool root_l = t.root_side() == Side::L;
  double prob = root_l ? 1.0 / (1.0 + spec.gamma()) : spec.gamma() / (1.0 + spec.gamma());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const BpNode& v = t.nodes[i];
    if (v.depth >= r) continue;
    const int c = static_cast<int>(v.children.size());
    const bool is_l = v.side == Side::L;
    if (i == 0) prob *= is_l ? spec.p()[c] : spec.q()[c];
    else prob *= is_l ? spec.p_tilde()[c] : spec.q_tilde()[c];
    if (prob == 0.0) return 0.0;
  }
  return prob;
}

/// Number of distinct orderings of the same unordered tree:
/// prod_v c_v! / prod over classes of isomorphic child subtrees of m!.
inline double ordering_count(const BpTree& t) {
  std::vector<std::string> code(t.nodes.size());
  double count = 1.0;
  for (std::size_t i = t.nodes.size(); i-- > 0;) {
    std::vector<std::string> kids;
    for (int c : t.nodes[i].children) kids.push_back(code[static_cast<std::size_t>(c)]);
    std::sort(kids.begin(), kids.end());
    for (std::size_t k = 1; k <= kids.size(); ++k) count *= static_cast<double>(k);
    for (std::size_t a = 0; a < kids.size();) {
      std::size_t b = a;
      while (b < kids.size() && kids[b] == kids[a]) ++b;
      for (std::size_t k = 1; k <= b - a; ++k) count /= static_cast<double>(k);
      a = b;
    }
    std::string s = t.nodes[i].side == Side::L ? "(l" : "(r";
    for (auto& k : kids) s += k;
    s += ')';
    code[i] = std::move(s);
  }
  return count;
}

/// Probability of the unordered isomorphism class of t.
inline double bp_class_probability(const LimitSpec& spec, const BpTree& t, int r) {
  return ordering_count(t) * bp_tree_probability(spec, t, r);
}

/// Side-marked rooted neighbourhood of a tree, for keying against census balls.
inline RootedNeighborhood to_neighborhood(const BpTree& t) {
  RootedNeighborhood nb;
  nb.radius = t.radius;
  nb.n = static_cast<int>(t.nodes.size());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const BpNode& v = t.nodes[i];
    nb.color.push_back(v.side == Side::R ? 1 : 0);
    nb.depth.push_back(v.depth);
    nb.parent.push_back(v.parent);
    if (v.parent >= 0) nb.edges.push_back({v.parent, static_cast<int>(i), 0});
  }
  return nb;
}

/// Inverse of to_neighborhood for side-marked tree balls; nullopt when the
/// ball is not a tree or its marks do not alternate.
inline std::optional<BpTree> tree_from_neighborhood(const RootedNeighborhood& nb) {
  if (!nb.is_tree() || nb.n == 0) return std::nullopt;
  BpTree t = BpTree::single(nb.color[0] == 1 ? Side::R : Side::L, nb.radius);
  std::vector<int> id(static_cast<std::size_t>(nb.n), -1);
  id[0] = 0;
  // BFS order guarantees parents precede children
  for (int v = 1; v < nb.n; ++v) {
    const int p = nb.parent[static_cast<std::size_t>(v)];
    if (p < 0 || id[static_cast<std::size_t>(p)] < 0) return std::nullopt;
    id[static_cast<std::size_t>(v)] = t.add_child(id[static_cast<std::size_t>(p)]);
    const Side want = nb.color[static_cast<std::size_t>(v)] == 1 ? Side::R : Side::L;
    if (t.nodes.back().side != want) return std::nullopt;
  }
  return t;
}

/// Limit probability of the class of a side-marked census ball (0 for
/// non-trees and broken alternation).
inline double bp_ball_probability(const LimitSpec& spec, const RootedNeighborhood& nb) {
  auto t = tree_from_neighborhood(nb);
  if (!t) return 0.0;
  try {
    return bp_class_probability(spec, *t, nb.radius);
  } catch (const Error&) {
    return 0.0;
  }
}

/// All ordered trees of depth <= r with positive probability, for finite supports.
inline std::vector<std::pair<BpTree, double>> enumerate_bp_trees(const LimitSpec& spec, BpRoot root, int r,
                                                                 std::size_t max_trees = 2'000'000) {
  std::vector<std::pair<BpTree, double>> out;
  auto support = [](const Pmf& f) {
    std::vector<int> s;
    for (int k = 0; k <= f.max_value(); ++k)
      if (f[k] > 0.0) s.push_back(k);
    return s;
  };
  const std::vector<int> sp = support(spec.p()), sq = support(spec.q()), spt = support(spec.p_tilde()),
                         sqt = support(spec.q_tilde());
  auto run = [&](Side side) {
    BpTree t = BpTree::single(side, r);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == t.nodes.size()) {
        if (out.size() >= max_trees) throw Error(ErrorCode::NeighborhoodTooLarge, "too many trees to enumerate");
        out.push_back({t, bp_tree_probability(spec, t, r)});
        return;
      }
      if (t.nodes[i].depth >= r) {
        self(self, i + 1);
        return;
      }
      const bool is_l = t.nodes[i].side == Side::L;
      const auto& s = i == 0 ? (is_l ? sp : sq) : (is_l ? spt : sqt);
      for (int c : s) {
        const std::size_t before = t.nodes.size();
        for (int k = 0; k < c; ++k) t.add_child(static_cast<int>(i));
        self(self, i + 1);
        t.nodes.resize(before);
        t.nodes[i].children.clear();
      }
    };
    rec(rec, 0);
  };
  if (root != BpRoot::R) run(Side::L);
  if (root != BpRoot::L) run(Side::R);
  return out;
}

/// Exact law of the side-marked r-ball classes of BP_s (or one side), keyed
/// like census balls.
inline std::map<std::string, double> exact_bp_ball_law(const LimitSpec& spec, BpRoot root, int r) {
  std::map<std::string, double> law;
  for (const auto& [t, p] : enumerate_bp_trees(spec, root, r)) law[canonical_key(to_neighborhood(t))] += p;
  return law;
}

/// One draw of B_t(CP, o) with the tree it came from.
struct CpSample {
  BpTree tree;                          // community-marked BP_l, depth 2t+1
  std::vector<int> individual_node;     // projected vertex -> tree node
  ProjectedGraph graph;                 // projection of the sampled individuals
  RootedNeighborhood ball;              // radius-t ball around the root individual
};

/// Samples the community-marked BP_l to depth 2t+1 and projects it. Each
/// community node a of degree d(a) gets a graph from mu_{.|d(a)}; the parent
/// individual takes role K ~ Unif[d(a)], the children take the remaining roles
/// in increasing order. Community nodes at the truncation depth stay unmarked:
/// they contribute no edge between sampled individuals.
inline CpSample sample_cp(const LimitSpec& spec, int t, Rng& rng) {
  const int depth = 2 * t + 1;
  CpSample s;
  s.tree = sample_bp(spec, BpRoot::L, depth, rng);
  BpTree& tr = s.tree;
  for (auto& v : tr.nodes) {
    if (v.side != Side::R || v.depth >= depth) continue;
    const int d = static_cast<int>(v.children.size()) + 1;
    v.community = static_cast<int>(spec.sample_conditional(d, rng));
    v.parent_slot = 1 + static_cast<int>(uniform_below<int>(rng, d));
    for (int j = 1; j <= d; ++j)
      if (j != v.parent_slot) v.child_slots.push_back(j);
  }
  std::vector<int> vertex(tr.nodes.size(), -1);
  for (std::size_t i = 0; i < tr.nodes.size(); ++i)
    if (tr.nodes[i].side == Side::L) {
      vertex[i] = static_cast<int>(s.individual_node.size());
      s.individual_node.push_back(static_cast<int>(i));
    }
  std::vector<std::uint64_t> keys;
  std::vector<int> holder;
  for (const auto& v : tr.nodes) {
    if (v.community < 0) continue;
    const CommunityGraph& h = spec.types().graphs[static_cast<std::size_t>(v.community)];
    holder.assign(static_cast<std::size_t>(h.size()) + 1, -1);
    holder[static_cast<std::size_t>(v.parent_slot)] = vertex[static_cast<std::size_t>(v.parent)];
    for (std::size_t c = 0; c < v.children.size(); ++c)
      holder[static_cast<std::size_t>(v.child_slots[c])] = vertex[static_cast<std::size_t>(v.children[c])];
    for (auto [j1, j2] : h.edges()) {
      const int a = holder[static_cast<std::size_t>(j1)], b = holder[static_cast<std::size_t>(j2)];
      if (a >= 0 && b >= 0) keys.push_back(pair_key(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)));
    }
  }
  s.graph = make_projected(s.individual_node.size(), std::move(keys),
                           std::vector<std::uint32_t>(s.individual_node.size(), 0));
  s.ball = extract_ball(s.graph, 0, t);
  return s;
}

inline CpSample sample_cp(const LimitSpec& spec, int t, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_cp(spec, t, rng);
}

struct CpStructure {
  bool simple = true;
  bool single_overlap = true;
};

/// Simplicity of the projection, and that any two communities of the tree
/// share at most one individual.
inline CpStructure check_cp_structure(const CpSample& s) {
  CpStructure out;
  out.simple = s.graph.is_simple();
  std::map<std::pair<int, int>, int> shared;
  std::vector<std::vector<int>> comms(s.tree.nodes.size());
  for (std::size_t i = 0; i < s.tree.nodes.size(); ++i) {
    const BpNode& v = s.tree.nodes[i];
    if (v.side != Side::R) continue;
    comms[static_cast<std::size_t>(v.parent)].push_back(static_cast<int>(i));
    for (int c : v.children) comms[static_cast<std::size_t>(c)].push_back(static_cast<int>(i));
  }
  for (const auto& cs : comms) {
    std::vector<int> u(cs);
    std::sort(u.begin(), u.end());
    if (std::adjacent_find(u.begin(), u.end()) != u.end()) out.single_overlap = false;
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = a + 1; b < u.size(); ++b)
        if (++shared[{u[a], u[b]}] > 1) out.single_overlap = false;
  }
  return out;
}

/// D^p = sum of D^l iid c-degrees drawn from rho.
inline std::uint64_t sample_Dp(const LimitSpec& spec, Rng& rng) {
  const int k = spec.p().sample(rng);
  std::uint64_t s = 0;
  for (int i = 0; i < k; ++i) s += static_cast<std::uint64_t>(spec.sample_role(rng).first);
  return s;
}

struct ZetaDraw {
  std::uint64_t triangles = 0;  // sum of Lambda
  std::uint64_t degree = 0;     // sum of D^c
  Rational exact() const {
    const std::uint64_t w = choose2(degree);
    return w ? Rational(static_cast<long long>(triangles), static_cast<long long>(w)) : Rational(0);
  }
  double value() const { return clustering_value(triangles, degree); }
};

/// zeta from D^l joint draws (D^c, Lambda) of rho; 0 when the degree is below 2.
inline ZetaDraw sample_zeta(const LimitSpec& spec, Rng& rng) {
  const int k = spec.p().sample(rng);
  ZetaDraw z;
  for (int i = 0; i < k; ++i) {
    auto [d, l] = spec.sample_role(rng);
    z.degree += static_cast<std::uint64_t>(d);
    z.triangles += static_cast<std::uint64_t>(l);
  }
  return z;
}

inline std::uint64_t sample_Dp(const LimitSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_Dp(spec, rng);
}

inline ZetaDraw sample_zeta(const LimitSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_zeta(spec, rng);
}

/// Law of (sum D^c, sum Lambda) over D^l iid roles, by convolution.
/// nullopt when the state space exceeds max_states.
inline std::optional<std::map<std::pair<std::uint64_t, std::uint64_t>, double>> exact_role_sum_law(
    const LimitSpec& spec, std::size_t max_states = 1'000'000) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> cur{{{0, 0}, 1.0}}, out;
  for (int k = 0; k <= spec.p().max_value(); ++k) {
    if (k > 0) {
      std::map<std::pair<std::uint64_t, std::uint64_t>, double> next;
      for (const auto& [st, w] : cur)
        for (const auto& [role, pr] : spec.rho())
          next[{st.first + static_cast<std::uint64_t>(role.first), st.second + static_cast<std::uint64_t>(role.second)}] +=
              w * pr;
      cur = std::move(next);
      if (cur.size() > max_states) return std::nullopt;
    }
    const double pk = spec.p()[k];
    if (pk == 0.0) continue;
    for (const auto& [st, w] : cur) out[st] += pk * w;
  }
  return out;
}

inline std::optional<std::map<std::uint64_t, double>> exact_Dp_law(const LimitSpec& spec) {
  auto joint = exact_role_sum_law(spec);
  if (!joint) return std::nullopt;
  std::map<std::uint64_t, double> law;
  for (const auto& [st, w] : *joint) law[st.first] += w;
  return law;
}

/// Law of zeta on the same double values that local clustering produces.
inline std::optional<std::map<double, double>> exact_zeta_law(const LimitSpec& spec) {
  auto joint = exact_role_sum_law(spec);
  if (!joint) return std::nullopt;
  std::map<double, double> law;
  for (const auto& [st, w] : *joint) law[clustering_value(st.second, st.first)] += w;
  return law;
}

/// E[D^r] E[D~^l], the limit of 2|L_1|/M.
inline double overlap_limit(const LimitSpec& spec) { return spec.q().mean() * spec.p_tilde().mean(); }

/// Some community with positive weight contains a triangle.
inline bool positive_clustering(const LimitSpec& spec) {
  for (const auto& [id, w] : spec.mu().weights)
    if (w > 0.0 && contains_triangle(spec.mu().graphs.at(id))) return true;
  return false;
}

/// E[sum Lambda] / E[C(sum D^c, 2)]; the global clustering is only believed
/// to converge to this value.
inline double global_clustering_limit(const LimitSpec& spec) {
  double ex = 0.0, ex2 = 0.0, el = 0.0;
  for (const auto& [role, w] : spec.rho()) {
    ex += w * role.first;
    ex2 += w * role.first * role.first;
    el += w * role.second;
  }
  const double ek = spec.p().mean(), ek2 = spec.p().second_moment();
  const double es2 = ek * (ex2 - ex * ex) + ek2 * ex * ex;  // E[S^2] for the compound sum
  const double wedges = (es2 - ek * ex) / 2.0;
  return wedges > 0.0 ? ek * el / wedges : 0.0;
}

}  // namespace rigc
