#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace rigc;

namespace {

bool brute_isomorphic(int n, const std::vector<std::pair<int, int>>& a, const std::vector<std::pair<int, int>>& b) {
  if (a.size() != b.size()) return false;
  std::set<std::pair<int, int>> sb;
  for (auto [x, y] : b) sb.insert({std::min(x, y), std::max(x, y)});
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (auto [x, y] : a) {
      int u = perm[static_cast<std::size_t>(x)], v = perm[static_cast<std::size_t>(y)];
      if (!sb.count({std::min(u, v), std::max(u, v)})) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

}  // namespace

TEST(Canonicalize, K2FromNames) {
  const auto g = canonicalize_named(std::vector<std::string>{"a", "b"}, {{"a", "b"}});
  EXPECT_EQ(g.size(), 2);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0], (std::pair{1, 2}));
}

TEST(Canonicalize, TriangleRoles) {
  const auto g = canonicalize(3, {{2, 0}, {1, 2}, {0, 1}});
  EXPECT_EQ(g, complete_graph(3));
  for (const auto& r : role_stats(g)) EXPECT_EQ(r, (RoleStat{2, 1}));
}

TEST(Canonicalize, PathOrientation) {
  const auto x = canonicalize_named(std::vector<std::string>{}, {{"a", "b"}, {"b", "c"}});
  const auto y = canonicalize_named(std::vector<std::string>{}, {{"c", "b"}, {"b", "a"}});
  EXPECT_EQ(x.canonical_id(), y.canonical_id());
  EXPECT_EQ(x.edges(), y.edges());
}

TEST(Canonicalize, Errors) {
  EXPECT_EQ(code_of([] { canonicalize(0, std::vector<std::pair<int, int>>{}); }), ErrorCode::EmptyCommunity);
  EXPECT_EQ(code_of([] { canonicalize(3, {{0, 1}}); }), ErrorCode::DisconnectedCommunity);
  EXPECT_EQ(code_of([] { canonicalize(2, {{0, 1}, {1, 0}}); }), ErrorCode::NonSimpleCommunity);
  EXPECT_EQ(code_of([] { canonicalize(2, {{0, 0}, {0, 1}}); }), ErrorCode::NonSimpleCommunity);
  EXPECT_EQ(code_of([] { canonicalize(3, {{0, 1}, {1, 2}}, 2); }), ErrorCode::CommunityTooLarge);
}

TEST(Canonicalize, SingleVertex) {
  const auto g = canonicalize(1, {});
  EXPECT_EQ(g.size(), 1);
  EXPECT_TRUE(g.edges().empty());
}

TEST(Canonicalize, Idempotent) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 8;
    const auto g = canonicalize(n, testutil::random_connected(n, 0.3, gen));
    const auto h = canonicalize_one_based(g.size(), g.edges());
    EXPECT_EQ(g.canonical_id(), h.canonical_id());
    EXPECT_EQ(g.edges(), h.edges());
  }
}

TEST(Canonicalize, RelabelingInvariance) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    const auto e = testutil::random_connected(n, 0.35, gen);
    const auto g = canonicalize(n, e);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 10; ++k) {
      std::shuffle(perm.begin(), perm.end(), gen);
      const auto h = canonicalize(n, testutil::relabel(e, perm));
      ASSERT_EQ(g.canonical_id(), h.canonical_id());
      ASSERT_EQ(g.edges(), h.edges());  // identical labeling, not only identical id
    }
  }
}

TEST(Canonicalize, IdEqualityMatchesBruteForceIsomorphism) {
  std::mt19937_64 gen(23);
  int iso = 0, non = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 3 + trial % 4;
    const auto a = testutil::random_connected(n, 0.3, gen);
    const auto b = testutil::random_connected(n, 0.3, gen);
    const bool same = canonicalize(n, a).canonical_id() == canonicalize(n, b).canonical_id();
    ASSERT_EQ(same, brute_isomorphic(n, a, b));
    (same ? iso : non)++;
  }
  EXPECT_GT(iso, 20);
  EXPECT_GT(non, 20);
}

TEST(Canonicalize, DistinguishesClassicPairs) {
  EXPECT_NE(path_graph(4), star_graph(4));
  EXPECT_NE(cycle_graph(4), path_graph(4));
  EXPECT_NE(complete_graph(4), cycle_graph(4));
  // two 3-regular graphs on 6 vertices: prism vs K_{3,3}
  const auto prism = canonicalize(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}});
  const auto k33 = canonicalize(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}});
  EXPECT_NE(prism, k33);
}

TEST(RoleStats, Examples) {
  for (const auto& r : role_stats(complete_graph(3))) EXPECT_EQ(r, (RoleStat{2, 1}));
  const auto p = role_stats(path_graph(3));
  std::multiset<std::pair<int, int>> got;
  for (const auto& r : p) got.insert({r.c_degree, r.triangles});
  EXPECT_EQ(got, (std::multiset<std::pair<int, int>>{{1, 0}, {1, 0}, {2, 0}}));
  for (const auto& r : role_stats(complete_graph(4))) EXPECT_EQ(r, (RoleStat{3, 3}));
}

TEST(RoleStats, Invariants) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 9;
    const auto g = canonicalize(n, testutil::random_connected(n, 0.4, gen));
    int sum = 0;
    for (const auto& r : role_stats(g)) {
      sum += r.c_degree;
      EXPECT_LE(r.triangles, r.c_degree * (r.c_degree - 1) / 2);
    }
    EXPECT_EQ(sum, 2 * static_cast<int>(g.edge_count()));
    const auto rs = role_stats(g);
    EXPECT_EQ(contains_triangle(g), std::any_of(rs.begin(), rs.end(), [](const RoleStat& r) { return r.triangles > 0; }));
  }
}

TEST(CommunityMeasure, Empirical) {
  const auto k2 = complete_graph(2), k3 = complete_graph(3);
  const auto m = empirical_community_measure({k2, k2, k3, k3});
  EXPECT_DOUBLE_EQ(m.weight(k2), 0.5);
  EXPECT_DOUBLE_EQ(m.weight(k3), 0.5);
  EXPECT_DOUBLE_EQ(m.q.at(2), 0.5);
  EXPECT_DOUBLE_EQ(m.q.at(3), 0.5);
  EXPECT_DOUBLE_EQ(empirical_community_measure({k3}).weight(k3), 1.0);
  EXPECT_THROW(empirical_community_measure({}), Error);
}

TEST(CommunityMeasure, EmpiricalOfDraws) {
  const auto spec = testutil::spec_of({{1, 1}}, {{complete_graph(2), .3}, {complete_graph(3), .7}});
  Rng rng = make_rng(99);
  std::vector<CommunityGraph> com;
  for (int i = 0; i < 1000; ++i) com.push_back(spec.types().graphs[spec.sample_community(rng)]);
  const auto m = empirical_community_measure(com);
  const double sd = std::sqrt(0.3 * 0.7 / 1000);
  EXPECT_NEAR(m.weight(complete_graph(2)), 0.3, 3 * sd);
  EXPECT_NEAR(m.weight(complete_graph(3)), 0.7, 3 * sd);
}

TEST(CommunityMeasure, SizeLawConsistent) {
  const auto m = make_measure({{path_graph(3), 1}, {complete_graph(3), 2}, {star_graph(4), 1}});
  double total = 0;
  for (const auto& [id, w] : m.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(m.q.at(3), 0.75, 1e-15);
  EXPECT_NEAR(m.q.at(4), 0.25, 1e-15);
}

TEST(RoleMeasure, Examples) {
  auto r = role_measure(std::vector{complete_graph(3)});
  EXPECT_DOUBLE_EQ(r.at({2, 1}), 1.0);
  r = role_measure(std::vector{complete_graph(2), complete_graph(3)});
  EXPECT_DOUBLE_EQ(r.at({1, 0}), 0.4);
  EXPECT_DOUBLE_EQ(r.at({2, 1}), 0.6);
  r = role_measure(std::vector{path_graph(3), complete_graph(3)});
  EXPECT_DOUBLE_EQ(r.at({1, 0}), 2.0 / 6);
  EXPECT_DOUBLE_EQ(r.at({2, 0}), 1.0 / 6);
  EXPECT_DOUBLE_EQ(r.at({2, 1}), 3.0 / 6);
}

TEST(RoleMeasure, Marginals) {
  const std::vector com{path_graph(3), complete_graph(4), star_graph(5), cycle_graph(4)};
  const auto r = role_measure(com);
  double total = 0, mean_deg = 0;
  for (const auto& [kt, w] : r) {
    total += w;
    mean_deg += kt.first * w;
  }
  int edges = 0, h = 0;
  for (const auto& g : com) {
    edges += static_cast<int>(g.edge_count());
    h += g.size();
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(mean_deg, 2.0 * edges / h, 1e-12);
  // measure form agrees with the list form on an equally weighted list
  const auto rm = role_measure(empirical_community_measure(com));
  for (const auto& [kt, w] : r) EXPECT_NEAR(rm.at(kt), w, 1e-12);
}

TEST(Catalog, RoundTrip) {
  std::istringstream in(
      "# test\n"
      "edge 0.25 2 1-2\n"
      "tri 0.5 3 3-1 1-2 2-3\n"
      "paw 0.25 4 1-2 2-3 1-3 3-4  # trailing comment\n");
  const Catalog cat = read_catalog(in);
  ASSERT_EQ(cat.size(), 3u);
  EXPECT_EQ(cat[cat.index_of("tri")].graph, complete_graph(3));
  std::ostringstream out;
  write_catalog(out, cat);
  std::istringstream again(out.str());
  const Catalog back = read_catalog(again);
  ASSERT_EQ(back.size(), cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    EXPECT_EQ(back[i].name, cat[i].name);
    EXPECT_EQ(back[i].graph, cat[i].graph);
    EXPECT_EQ(back[i].graph.edges(), cat[i].graph.edges());
    EXPECT_EQ(back[i].weight, cat[i].weight);
  }
  EXPECT_NEAR(cat.measure().weight(complete_graph(3)), 0.5, 1e-15);
}

TEST(Catalog, Errors) {
  std::istringstream bad_edge("x 1 2 1_2\n");
  EXPECT_THROW(read_catalog(bad_edge), Error);
  std::istringstream dup("x 1 2 1-2\nx 1 2 1-2\n");
  EXPECT_THROW(read_catalog(dup), Error);
  std::istringstream disconnected("x 1 3 1-2\n");
  EXPECT_THROW(read_catalog(disconnected), Error);
  EXPECT_THROW(read_catalog_file("/nonexistent/catalog.txt"), Error);
}

TEST(ColoredCanonical, MultigraphRelabeling) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 8;
    canon::ColoredGraph g;
    g.n = n;
    for (int v = 0; v < n; ++v) g.color.push_back(static_cast<std::int64_t>(gen() % 2));
    for (auto [a, b] : testutil::random_connected(n, 0.2, gen))
      g.edges.push_back({a, b, static_cast<std::int64_t>(gen() % 3)});
    g.edges.push_back({0, 0, 1});                      // self-loop
    g.edges.push_back(g.edges.front());                // parallel edge
    const auto c = canon::canonical_labeling(g).certificate;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    canon::ColoredGraph h;
    h.n = n;
    h.color.assign(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) h.color[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = g.color[static_cast<std::size_t>(v)];
    for (const auto& e : g.edges) h.edges.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)], e.mark});
    std::shuffle(h.edges.begin(), h.edges.end(), gen);
    ASSERT_EQ(c, canon::canonical_labeling(h).certificate);
  }
}

TEST(ColoredCanonical, MarksMatter) {
  canon::ColoredGraph a{2, {0, 0}, {{0, 1, 1}}};
  canon::ColoredGraph b{2, {0, 0}, {{0, 1, 2}}};
  canon::ColoredGraph c{2, {0, 1}, {{0, 1, 1}}};
  EXPECT_NE(canon::canonical_labeling(a).certificate, canon::canonical_labeling(b).certificate);
  EXPECT_NE(canon::canonical_labeling(a).certificate, canon::canonical_labeling(c).certificate);
}
