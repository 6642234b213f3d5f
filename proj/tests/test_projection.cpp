#include <gtest/gtest.h>

#include <sstream>

#include "oracle.hpp"
#include "test_util.hpp"

using namespace rigc;

TEST(Project, ForcedEdge) {
  const auto mp = ModelParams::from_explicit({1, 1}, {complete_graph(2)});
  const auto g = project(sample_uniform_matching(mp, 1));
  EXPECT_EQ(g.multiplicity(0, 1), 1u);
  EXPECT_EQ(g.self_loop_total(), 0u);
  EXPECT_TRUE(g.is_simple());
}

TEST(Project, SelfLoopCountsTwice) {
  const auto mp = ModelParams::from_explicit({2}, {complete_graph(2)});
  const auto g = project(sample_uniform_matching(mp, 1));
  EXPECT_EQ(g.self_loops(0), 1u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.edge_instances(), 1u);
}

TEST(Project, TwoTrianglesAgainstOracle) {
  const auto mp = ModelParams::from_explicit({2, 2, 2}, {complete_graph(3), complete_graph(3)});
  std::map<std::pair<std::uint64_t, std::size_t>, int> lib, ref;
  for_each_matching(mp, [&](const BipartiteMatching& m) {
    const auto g = project(m);
    ++lib[{g.self_loop_total(), g.multi_edge_pairs()}];
    const auto p = oracle::project(mp, oracle::holders(mp, m.l_to_r()));
    std::uint64_t loops = 0;
    std::size_t multi = 0;
    for (int v = 0; v < 3; ++v) {
      loops += static_cast<std::uint64_t>(oracle::multiplicity(p, v, v));
      for (int w = v + 1; w < 3; ++w) multi += oracle::multiplicity(p, v, w) >= 2;
    }
    ++ref[{loops, multi}];
  });
  EXPECT_EQ(lib, ref);
  int total = 0;
  for (const auto& [k, c] : lib) total += c;
  EXPECT_EQ(total, 720);
}

TEST(Project, MultiplicitiesMatchOracleOnCorpus) {
  for (const auto& inst : oracle::corpus()) {
    const auto mp = ModelParams::from_explicit(inst.degrees, inst.communities);
    for_each_matching(mp, [&](const BipartiteMatching& m) {
      const auto g = project(m, true);
      const auto p = oracle::project(mp, oracle::holders(mp, m.l_to_r()));
      for (int v = 0; v < p.n; ++v) {
        ASSERT_EQ(g.degree(static_cast<std::size_t>(v)), static_cast<std::uint64_t>(oracle::degree(p, v))) << inst.label;
        for (int w = v; w < p.n; ++w)
          ASSERT_EQ(g.multiplicity(static_cast<std::size_t>(v), static_cast<std::size_t>(w)),
                    static_cast<std::uint32_t>(oracle::multiplicity(p, v, w)))
              << inst.label;
      }
    });
  }
}

TEST(Project, InvariantsOnRandomInstance) {
  const auto mp = generate_iid_repaired(testutil::mixed_spec(), 20000, 3).params;
  const auto m = sample_uniform_matching(mp, 3);
  const auto g = project(m, true);
  std::uint64_t community_edges = 0;
  for (std::size_t a = 0; a < mp.community_count(); ++a) community_edges += mp.community(a).edge_count();
  EXPECT_EQ(g.edge_instances(), community_edges);

  // p-deg(v) = sum of c-degrees of the roles v holds
  const auto mem = memberships(m);
  for (std::size_t v = 0; v < mp.individuals(); ++v) {
    std::uint64_t s = 0;
    for (const auto& r : mem[v]) s += static_cast<std::uint64_t>(mp.community_roles(r.community)[static_cast<std::size_t>(r.role - 1)].c_degree);
    ASSERT_EQ(g.degree(v), s);
  }

  ASSERT_TRUE(g.provenance().has_value());
  ASSERT_EQ(g.provenance()->size(), community_edges);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> from_prov;
  for (const auto& e : *g.provenance()) {
    EXPECT_TRUE(mp.community(e.community).has_edge(e.j1, e.j2));
    EXPECT_EQ(m.holder(e.community, e.j1), e.v);
    EXPECT_EQ(m.holder(e.community, e.j2), e.w);
    ++from_prov[{std::min(e.v, e.w), std::max(e.v, e.w)}];
  }
  for (const auto& [vw, x] : from_prov) EXPECT_EQ(g.multiplicity(vw.first, vw.second), x);
}

TEST(Project, ProvenanceDefaultsBySize) {
  const auto mp = ModelParams::from_explicit({1, 1}, {complete_graph(2)});
  const auto m = sample_uniform_matching(mp, 1);
  EXPECT_TRUE(project(m).provenance().has_value());
  EXPECT_FALSE(project(m, false).provenance().has_value());
}

TEST(Project, RandomIntersectionGraphSpecialization) {
  const auto spec = testutil::spec_of({{1, 1}, {2, 2}, {3, 1}}, {{complete_graph(2), 1}, {complete_graph(3), 1}, {complete_graph(4), 1}});
  const auto mp = generate_iid_repaired(spec, 3000, 12).params;
  const auto m = sample_uniform_matching(mp, 12);
  const auto e = erase(project(m));
  std::set<std::pair<std::uint32_t, std::uint32_t>> shared;
  std::vector<std::vector<std::uint32_t>> members(mp.community_count());
  const auto mem = memberships(m);
  for (std::uint32_t v = 0; v < mp.individuals(); ++v)
    for (const auto& r : mem[v]) members[r.community].push_back(v);
  for (auto& c : members)
    for (auto x : c)
      for (auto y : c)
        if (x < y) shared.insert({x, y});
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& p : e.pairs()) edges.insert({p.v, p.w});
  EXPECT_EQ(edges, shared);
}

TEST(Erase, Examples) {
  const ProjectedGraph g = make_projected(2, {pair_key(0, 1), pair_key(0, 1), pair_key(1, 0)}, {1, 0});
  EXPECT_EQ(g.multiplicity(0, 1), 3u);
  const auto e = erase(g);
  EXPECT_EQ(e.multiplicity(0, 1), 1u);
  EXPECT_EQ(e.self_loops(0), 0u);
  EXPECT_TRUE(e.is_simple());

  const ProjectedGraph s = make_projected(3, {pair_key(0, 1), pair_key(1, 2)}, {});
  EXPECT_TRUE(erase(s) == s);
  const ProjectedGraph empty(4, {}, {});
  EXPECT_TRUE(erase(empty) == empty);
  EXPECT_EQ(erase(empty).edge_instances(), 0u);
}

TEST(Memberships, Examples) {
  const auto mp = ModelParams::from_explicit({1, 1}, {complete_graph(2)});
  const auto mem = memberships(sample_uniform_matching(mp, 5));
  ASSERT_EQ(mem[0].size(), 1u);
  ASSERT_EQ(mem[1].size(), 1u);
  EXPECT_EQ(mem[0][0].community, 0u);
  EXPECT_NE(mem[0][0].role, mem[1][0].role);

  const auto big = generate_iid_repaired(testutil::mixed_spec(), 1000, 5).params;
  const auto m = sample_uniform_matching(big, 5);
  const auto all = memberships(m);
  EXPECT_EQ(all.total(), big.half_edges());
  std::set<std::pair<std::uint32_t, int>> roles;
  for (std::size_t v = 0; v < big.individuals(); ++v) {
    EXPECT_EQ(all[v].size(), static_cast<std::size_t>(big.l_degree(v)));
    for (const auto& r : all[v]) {
      roles.insert({r.community, r.role});
      EXPECT_EQ(m.holder(r.community, r.role), v);
    }
  }
  EXPECT_EQ(roles.size(), big.half_edges());
}

TEST(ProjectedIo, RoundTrip) {
  const auto mp = generate_iid_repaired(testutil::mixed_spec(), 2000, 6).params;
  const auto g = project(sample_uniform_matching(mp, 6));
  std::stringstream ss;
  write_projected(ss, g);
  const auto back = read_projected(ss, g.size());
  EXPECT_TRUE(back == g);
  std::ostringstream el;
  write_edge_list(el, erase(g));
  const std::string text = el.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), g.pairs().size());
  std::istringstream bad("1 2 0\n");
  EXPECT_THROW(read_projected(bad, 2), Error);
  std::istringstream out_of_range("1 3 1\n");
  EXPECT_THROW(read_projected(out_of_range, 2), Error);
}
