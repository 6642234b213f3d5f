#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace rigc;

namespace {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

ProjectedGraph graph_of(std::size_t n, const EdgeList& edges) {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> loops(n, 0);
  for (auto [v, w] : edges) {
    if (v == w) ++loops[v];
    else keys.push_back(pair_key(v, w));
  }
  return make_projected(n, keys, loops);
}

EdgeList random_tree(std::uint32_t n, std::mt19937_64& g) {
  EdgeList e;
  for (std::uint32_t v = 1; v < n; ++v) e.push_back({static_cast<std::uint32_t>(g() % v), v});
  return e;
}

/// Rooted marked multigraph isomorphism by backtracking over vertex permutations.
bool brute_isomorphic(const RootedNeighborhood& a, const RootedNeighborhood& b) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  const int n = a.n;
  auto count = [](const RootedNeighborhood& x) {
    std::map<std::tuple<int, int, std::int64_t>, int> c;
    for (const auto& e : x.edges) ++c[{std::min(e.u, e.v), std::max(e.u, e.v), e.mark}];
    return c;
  };
  const auto ca = count(a), cb = count(b);
  std::vector<int> f(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> go = [&](int k) -> bool {
    if (k == n) return true;
    for (int t = 0; t < n; ++t) {
      if (used[static_cast<std::size_t>(t)] || (k == 0) != (t == 0)) continue;  // root to root
      if (a.color[static_cast<std::size_t>(k)] != b.color[static_cast<std::size_t>(t)]) continue;
      f[static_cast<std::size_t>(k)] = t;
      bool ok = true;
      // edges between k and already placed vertices must agree
      for (const auto& [key, c] : ca) {
        auto [u, v, mk] = key;
        if (std::max(u, v) != k) continue;
        const int x = f[static_cast<std::size_t>(u)], y = f[static_cast<std::size_t>(v)];
        auto it = cb.find({std::min(x, y), std::max(x, y), mk});
        if (it == cb.end() || it->second != c) {
          ok = false;
          break;
        }
      }
      if (ok) {
        used[static_cast<std::size_t>(t)] = 1;
        if (go(k + 1)) return true;
        used[static_cast<std::size_t>(t)] = 0;
      }
      f[static_cast<std::size_t>(k)] = -1;
    }
    return false;
  };
  return go(0);
}

RootedNeighborhood relabeled_ball(std::size_t n, const EdgeList& edges, std::uint32_t root, int r, std::mt19937_64& g) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), g);
  EdgeList e;
  for (auto [v, w] : edges) e.push_back({perm[v], perm[w]});
  std::shuffle(e.begin(), e.end(), g);
  return extract_ball(graph_of(n, e), perm[root], r);
}

}  // namespace

TEST(ExtractBall, RadiusZero) {
  const auto mp = ModelParams::from_explicit({2, 1}, {complete_graph(3)});
  const auto m = sample_uniform_matching(mp, 1);
  const auto b = extract_ball(m, {Side::R, 0}, 0, MarkMode::Side);
  EXPECT_EQ(b.n, 1);
  EXPECT_EQ(b.root_mark(), 1);
  EXPECT_TRUE(b.edges.empty());
}

TEST(ExtractBall, BcmStar) {
  const auto mp = generate_iid_repaired(testutil::mixed_spec(), 2000, 1).params;
  const auto m = sample_uniform_matching(mp, 1);
  for (std::uint32_t v = 0; v < 50; ++v) {
    const auto b = extract_ball(m, {Side::L, v}, 1, MarkMode::Side);
    EXPECT_EQ(static_cast<int>(b.edges.size()), mp.l_degree(v));
    for (int x = 1; x < b.n; ++x) EXPECT_EQ(b.color[static_cast<std::size_t>(x)], 1);
  }
}

TEST(ExtractBall, ForcedPath) {
  const auto mp = ModelParams::from_explicit({1, 1}, {complete_graph(2)});
  const auto b = extract_ball(sample_uniform_matching(mp, 1), {Side::L, 0}, 2, MarkMode::Side);
  EXPECT_EQ(b.n, 3);
  EXPECT_EQ(b.depth, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(b.color, (std::vector<std::int64_t>{0, 1, 0}));
  EXPECT_TRUE(b.is_tree());
}

TEST(ExtractBall, SideMarksAlternate) {
  const auto mp = generate_iid_repaired(testutil::mixed_spec(), 3000, 2).params;
  const auto m = sample_uniform_matching(mp, 2);
  BcmBallExtractor ex(m);
  for (std::uint32_t v = 0; v < 300; ++v)
    for (Side s : {Side::L, Side::R}) {
      if (s == Side::R && v >= mp.community_count()) continue;
      const auto b = ex.extract({s, v}, 3, MarkMode::Side);
      const int root = s == Side::L ? 0 : 1;
      for (int x = 0; x < b.n; ++x)
        ASSERT_EQ(b.color[static_cast<std::size_t>(x)], (root + b.depth[static_cast<std::size_t>(x)]) % 2);
      for (const auto& e : b.edges) ASSERT_NE(b.color[static_cast<std::size_t>(e.u)], b.color[static_cast<std::size_t>(e.v)]);
    }
}

TEST(ExtractBall, ClosedBallKeepsRimEdges) {
  // triangle: the radius-1 ball around 0 contains the edge 1-2 at depth 1
  const auto b = extract_ball(graph_of(3, {{0, 1}, {1, 2}, {2, 0}}), 0, 1);
  EXPECT_EQ(b.edges.size(), 3u);
  EXPECT_FALSE(b.is_tree());
}

TEST(CanonicalKey, RelabeledTreesCollide) {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(trial % 9);
    const auto t = random_tree(n, g);
    const auto a = relabeled_ball(n, t, 0, 10, g), b = relabeled_ball(n, t, 0, 10, g);
    ASSERT_EQ(canonical_key(a), canonical_key(b));
  }
}

TEST(CanonicalKey, StarVersusPath) {
  const auto star = extract_ball(graph_of(4, {{0, 1}, {0, 2}, {0, 3}}), 0, 3);
  const auto path = extract_ball(graph_of(4, {{0, 1}, {1, 2}, {2, 3}}), 0, 3);
  EXPECT_NE(canonical_key(star), canonical_key(path));
  // same path rooted at an end and at an interior vertex
  EXPECT_NE(canonical_key(path), canonical_key(extract_ball(graph_of(4, {{0, 1}, {1, 2}, {2, 3}}), 1, 3)));
}

TEST(CanonicalKey, RandomTreesAgainstBruteForce) {
  std::mt19937_64 g(7);
  int iso = 0, non = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(trial % 8);  // up to 10 vertices
    const auto t = random_tree(n, g);
    EdgeList u = t;
    if (g() % 2) {
      // move one leaf, which may or may not change the isomorphism class
      auto& e = u[g() % u.size()];
      e.first = static_cast<std::uint32_t>(g() % e.second);
    }
    const auto a = relabeled_ball(n, t, 0, 10, g), b = relabeled_ball(n, u, 0, 10, g);
    const bool same = canonical_key(a) == canonical_key(b);
    ASSERT_EQ(same, brute_isomorphic(a, b)) << trial;
    (same ? iso : non)++;
  }
  EXPECT_GT(iso, 50);
  EXPECT_GT(non, 50);
}

TEST(CanonicalKey, RandomMultigraphsAgainstBruteForce) {
  std::mt19937_64 g(9);
  int iso = 0, non = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(trial % 6);
    auto e = random_tree(n, g);
    for (int k = 0; k < 3; ++k) e.push_back({static_cast<std::uint32_t>(g() % n), static_cast<std::uint32_t>(g() % n)});
    auto f = e;
    if (g() % 2) f.back() = {static_cast<std::uint32_t>(g() % n), static_cast<std::uint32_t>(g() % n)};
    const std::uint32_t root = static_cast<std::uint32_t>(g() % n);
    const auto a = relabeled_ball(n, e, root, 2, g), b = relabeled_ball(n, f, root, 2, g);
    const bool same = canonical_key(a) == canonical_key(b);
    ASSERT_EQ(same, brute_isomorphic(a, b)) << trial;
    (same ? iso : non)++;
  }
  EXPECT_GT(iso, 50);
  EXPECT_GT(non, 50);
}

TEST(CanonicalKey, SizeBoundGivesLargeKey) {
  EdgeList star;
  for (std::uint32_t v = 1; v < 20; ++v) star.push_back({0, v});
  const auto g = graph_of(20, star);
  EXPECT_EQ(canonical_key(extract_ball(g, 0, 1), 10), kLargeKey);
  const auto c = neighborhood_frequencies(g, 1, 10);
  EXPECT_EQ(c.large, 1u);
  EXPECT_EQ(key_hex(kLargeKey), kLargeKey);
}

TEST(Census, SingleKeyForMatchedPairs) {
  const auto mp = ModelParams::from_explicit(std::vector<int>(10, 1), std::vector(5, complete_graph(2)));
  const auto c = neighborhood_frequencies(sample_uniform_matching(mp, 3), RootSet::L, 1, MarkMode::Side);
  ASSERT_EQ(c.counts.size(), 1u);
  EXPECT_DOUBLE_EQ(c.frequencies().begin()->second, 1.0);
}

TEST(Census, FrequenciesSumToOne) {
  const auto mp = generate_iid_repaired(testutil::mixed_spec(), 3000, 4).params;
  const auto m = sample_uniform_matching(mp, 4);
  for (int r : {0, 1, 2, 3}) {
    const auto c = neighborhood_frequencies(m, RootSet::All, r, MarkMode::Side);
    double s = 0;
    for (const auto& [k, f] : c.frequencies()) s += f;
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(c.total, mp.individuals() + mp.community_count());
  }
  const auto rc = neighborhood_frequencies(m, RootSet::R, 1, MarkMode::Community);
  EXPECT_EQ(rc.total, mp.community_count());
}

TEST(Census, ExpectedFrequenciesMatchEnumeration) {
  const auto mp = ModelParams::from_explicit({2, 1, 1}, {complete_graph(3), complete_graph(1)});
  std::map<std::string, double> exact;
  std::size_t count = 0;
  for_each_matching(mp, [&](const BipartiteMatching& m) {
    for (const auto& [k, f] : neighborhood_frequencies(m, RootSet::All, 2, MarkMode::Side).frequencies()) exact[k] += f;
    ++count;
  });
  for (auto& [k, f] : exact) f /= static_cast<double>(count);
  std::map<std::string, double> sampled;
  const std::size_t draws = 20000;
  Rng rng = make_rng(5);
  for (std::size_t d = 0; d < draws; ++d)
    for (const auto& [k, f] : neighborhood_frequencies(sample_uniform_matching(mp, rng), RootSet::All, 2, MarkMode::Side).frequencies())
      sampled[k] += f / static_cast<double>(draws);
  for (const auto& [k, p] : exact) EXPECT_NEAR(sampled[k], p, 3 * std::sqrt(p * (1 - p) / draws) + 1e-12);
  for (const auto& [k, p] : sampled) EXPECT_TRUE(exact.count(k));
}

TEST(Census, InvariantUnderRelabeling) {
  const auto mp = generate_iid_repaired(testutil::mixed_spec(), 2000, 6).params;
  const auto g = project(sample_uniform_matching(mp, 6));
  std::mt19937_64 gen(6);
  std::vector<std::uint32_t> perm(g.size());
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> loops(g.size(), 0);
  for (const auto& p : g.pairs())
    for (std::uint32_t c = 0; c < p.mult; ++c) keys.push_back(pair_key(perm[p.v], perm[p.w]));
  for (std::uint32_t v = 0; v < g.size(); ++v) loops[perm[v]] = g.self_loops(v);
  const auto h = make_projected(g.size(), keys, loops);
  for (int r : {1, 2}) EXPECT_EQ(neighborhood_frequencies(g, r).counts, neighborhood_frequencies(h, r).counts);
}

TEST(LocalDistance, Examples) {
  const auto path5 = graph_of(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  const auto path4 = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_DOUBLE_EQ(local_distance(extract_ball(path5, 0, 4), extract_ball(path5, 0, 4)), std::ldexp(1.0, -4));
  EXPECT_DOUBLE_EQ(local_distance(extract_ball(path5, 0, 4), extract_ball(path4, 0, 4)), std::ldexp(1.0, -3));
  const auto mp = ModelParams::from_explicit({1, 1}, {complete_graph(2)});
  const auto m = sample_uniform_matching(mp, 1);
  EXPECT_DOUBLE_EQ(local_distance(extract_ball(m, {Side::L, 0}, 1, MarkMode::Side), extract_ball(m, {Side::R, 0}, 1, MarkMode::Side)), 2.0);
  EXPECT_THROW(local_distance(extract_ball(path5, 0, 1), extract_ball(path5, 0, 2)), Error);
}

TEST(Census, Dump) {
  const auto g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto c = neighborhood_frequencies(g, 1);
  std::ostringstream out, side;
  write_census(out, c);
  write_census_sidecar(side, c);
  std::istringstream in(out.str());
  std::string key;
  std::uint64_t n = 0, total = 0;
  while (in >> key >> n) total += n;
  EXPECT_EQ(total, 4u);
  EXPECT_NE(side.str().find("edges="), std::string::npos);
}

TEST(TotalVariation, Basics) {
  EXPECT_DOUBLE_EQ(total_variation({{"a", 0.5}, {"b", 0.5}}, {{"a", 0.5}, {"b", 0.5}}), 0.0);
  EXPECT_DOUBLE_EQ(total_variation({{"a", 1.0}}, {{"b", 1.0}}), 1.0);
  EXPECT_DOUBLE_EQ(total_variation({{"a", 0.75}, {"b", 0.25}}, {{"a", 0.5}, {"c", 0.5}}), 0.5);
}
