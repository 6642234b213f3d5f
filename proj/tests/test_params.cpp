#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace rigc;
using testutil::spec_of;

TEST(ModelParams, ExplicitExamples) {
  const auto a = ModelParams::from_explicit({1, 1}, {complete_graph(2)});
  EXPECT_EQ(a.half_edges(), 2u);
  const auto b = ModelParams::from_explicit({2, 2, 1}, {complete_graph(3), complete_graph(2)});
  EXPECT_EQ(b.half_edges(), 5u);
  EXPECT_EQ(b.r_degrees(), (std::vector<int>{3, 2}));
  EXPECT_EQ(b.individuals(), 3u);
  EXPECT_EQ(b.community_count(), 2u);
}

TEST(ModelParams, HalfEdgeMismatch) {
  try {
    ModelParams::from_explicit({2, 1}, {complete_graph(3), complete_graph(2)});
    FAIL();
  } catch (const HalfEdgeMismatch& e) {
    EXPECT_EQ(e.l_sum(), 3u);
    EXPECT_EQ(e.r_sum(), 5u);
    EXPECT_EQ(e.code(), ErrorCode::HalfEdgeMismatch);
  }
}

TEST(ModelParams, ZeroAndEmpty) {
  try {
    ModelParams::from_explicit({0, 2}, {complete_graph(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroDegree);
  }
  try {
    ModelParams::from_explicit({}, {complete_graph(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Empty);
  }
  try {
    ModelParams::from_explicit({1}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Empty);
  }
}

TEST(LimitSpec, SizeBiasing) {
  const auto spec = testutil::mixed_spec();
  for (const Pmf* x : {&spec.p(), &spec.q()}) {
    const Pmf star = x->size_biased(), tilde = x->tilted();
    double total = 0;
    for (int k = 0; k <= star.max_value(); ++k) {
      total += star[k];
      EXPECT_NEAR(star[k], k * (*x)[k] / x->mean(), 1e-15);
      EXPECT_NEAR(tilde[k], star[k + 1], 1e-15);
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_NEAR(tilde.mean(), x->factorial_moment2() / x->mean(), 1e-14);
  }
  EXPECT_NEAR(spec.gamma(), 2.0 / 2.8, 1e-15);
  EXPECT_NEAR(spec.q()[2], 0.4, 1e-15);
  EXPECT_NEAR(spec.q()[3], 0.4, 1e-15);
  EXPECT_NEAR(spec.q()[4], 0.2, 1e-15);
}

TEST(LimitSpec, RejectsZeroDegreeMass) {
  EXPECT_THROW(spec_of({{0, 1}, {1, 1}}, {{complete_graph(2), 1}}), Error);
}

TEST(Pmf, TruncationMassReported) {
  const Pmf p = Pmf::from_weights({{1, 0.5}, {2, 0.25}, {3, 0.125}});
  EXPECT_NEAR(p.truncation_mass(), 0.125, 1e-15);
  EXPECT_NEAR(p[1], 0.5 / 0.875, 1e-15);
}

TEST(GenerateIid, DeterministicLawsNeedNoRepair) {
  const auto spec = spec_of({{2, 1}}, {{complete_graph(2), 1}});
  const auto g = generate_iid_repaired(spec, 10, 1);
  EXPECT_EQ(g.params.l_degrees(), std::vector<int>(10, 2));
  EXPECT_EQ(g.params.community_count(), 10u);
  EXPECT_EQ(g.repair.repair_count(), 0u);
}

TEST(GenerateIid, TriangleRepairN7) {
  const auto spec = spec_of({{1, 1}}, {{complete_graph(3), 1}});
  const auto g = generate_iid_repaired(spec, 7, 4);
  std::uint64_t l = 0;
  for (int d : g.params.l_degrees()) l += static_cast<std::uint64_t>(d);
  EXPECT_EQ(l, 3 * g.params.community_count());
  EXPECT_GE(g.repair.repair_count(), 1u);
  EXPECT_LE(g.repair.l_adjustments, 2u);
}

TEST(GenerateIid, MinimalRepairExhaustive) {
  // p = delta_1, mu = delta_K3: the smallest repair raises the l-sum to the next multiple of 3.
  const auto spec = spec_of({{1, 1}}, {{complete_graph(3), 1}});
  for (std::size_t n = 1; n <= 30; ++n)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = generate_iid_repaired(spec, n, seed);
      EXPECT_EQ(g.repair.l_adjustments, (3 - n % 3) % 3) << n;
      EXPECT_EQ(g.params.half_edges() % 3, 0u);
    }
}

TEST(GenerateIid, RepairBudgetOverSeeds) {
  const auto spec = spec_of({{1, 16}, {2, 8}, {3, 4}, {4, 2}, {5, 1}}, {{complete_graph(2), 1}, {complete_graph(3), 1}});
  const std::size_t n = 10000;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = generate_iid_repaired(spec, n, seed);
    EXPECT_LE(g.repair.repair_count(), n / 100) << seed;
  }
}

TEST(GenerateIid, Reproducible) {
  const auto spec = testutil::mixed_spec();
  const auto a = generate_iid_repaired(spec, 5000, 77), b = generate_iid_repaired(spec, 5000, 77);
  std::ostringstream da, db, ca, cb;
  write_degrees(da, a.params);
  write_degrees(db, b.params);
  write_community_names(ca, a.params);
  write_community_names(cb, b.params);
  EXPECT_EQ(da.str(), db.str());
  EXPECT_EQ(ca.str(), cb.str());
  const auto c = generate_iid_repaired(spec, 5000, 78);
  EXPECT_NE(a.params.l_degrees(), c.params.l_degrees());
}

TEST(GenerateIid, InfeasibleBudget) {
  const auto spec = spec_of({{1, 1}}, {{complete_graph(3), 1}});
  RepairOptions opts;
  opts.budget = 0;
  opts.max_attempts = 5;
  try {
    generate_iid_repaired(spec, 7, 1, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleRepair);
  }
}

TEST(Conditional, DeltaTable) {
  ConditionalTables t{{3, {{complete_graph(3), 1.0}}}};
  const auto spec = spec_of({{1, 1}}, {{complete_graph(3), 1}}, t);
  EXPECT_EQ(generate_conditional(spec, {3, 3}, 5), (std::vector{complete_graph(3), complete_graph(3)}));
}

TEST(Conditional, Missing) {
  ConditionalTables t{{3, {{complete_graph(3), 1.0}}}};
  const auto spec = spec_of({{1, 1}}, {{complete_graph(3), 1}}, t);
  try {
    generate_conditional(spec, {3, 2}, 5);
    FAIL();
  } catch (const MissingConditional& e) {
    EXPECT_EQ(e.size(), 2);
  }
}

TEST(Conditional, DerivedFromMuReconstructsMu) {
  const auto spec = spec_of({{1, 1}}, {{complete_graph(3), .2}, {path_graph(3), .3}, {complete_graph(2), .1}, {star_graph(4), .4}});
  std::map<std::string, double> rebuilt;
  for (const auto& [k, qk] : spec.mu().q)
    for (const auto& [t, w] : spec.conditional(k)) rebuilt[spec.types().graphs[t].canonical_id()] += w * qk;
  ASSERT_EQ(rebuilt.size(), spec.mu().weights.size());
  for (const auto& [id, w] : spec.mu().weights) EXPECT_NEAR(rebuilt.at(id), w, 1e-15);
}

TEST(Conditional, UniformOverFourShapes) {
  const std::vector four{complete_graph(4), cycle_graph(4), path_graph(4), star_graph(4)};
  ConditionalTables t;
  for (const auto& g : four) t[4].push_back({g, 1.0});
  const auto spec = spec_of({{1, 1}}, {{complete_graph(4), 1}}, t);
  const std::size_t draws = 10000;
  const auto com = generate_conditional(spec, std::vector<int>(draws, 4), 12);
  std::map<std::string, int> count;
  for (const auto& g : com) ++count[g.canonical_id()];
  const double sd = std::sqrt(0.25 * 0.75 / draws);
  for (const auto& g : four) EXPECT_NEAR(count[g.canonical_id()] / double(draws), 0.25, 3 * sd);
}

TEST(Conditional, SizeMismatchRejected) {
  ConditionalTables t{{3, {{complete_graph(2), 1.0}}}};
  EXPECT_THROW(spec_of({{1, 1}}, {{complete_graph(3), 1}}, t), Error);
}

TEST(Assumptions, IidFamilyGapsShrink) {
  const auto spec = testutil::mixed_spec();
  std::vector<ModelParams> fam;
  for (std::size_t n : {1000, 10000, 100000}) fam.push_back(generate_iid_repaired(spec, n, n).params);
  const auto rep = check_assumptions(fam, spec);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_LT(rep.rows.back().p_distance, rep.rows.front().p_distance);
  EXPECT_LT(rep.rows.back().mean_l_gap, 0.02);
  EXPECT_NEAR(rep.rows.back().gamma_n, spec.gamma(), 0.01);
  EXPECT_FALSE(rep.max_degree_flag);
}

TEST(Assumptions, ConstantFamilyHasZeroGaps) {
  const auto spec = spec_of({{2, 1}}, {{complete_graph(2), 1}});
  std::vector<ModelParams> fam;
  for (std::size_t n : {10, 100, 1000})
    fam.push_back(ModelParams::from_explicit(std::vector<int>(n, 2), std::vector(n, complete_graph(2))));
  const auto rep = check_assumptions(fam, spec);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.p_distance, 0.0);
    EXPECT_EQ(r.mean_l_gap, 0.0);
    EXPECT_EQ(r.mu_distance, 0.0);
    EXPECT_EQ(r.mean_r_gap, 0.0);
  }
  EXPECT_TRUE(rep.mean_gap_decreasing);
}

TEST(Assumptions, HubFlagged) {
  const auto spec = spec_of({{1, 1}}, {{complete_graph(1), 1}});
  std::vector<ModelParams> fam;
  for (int n : {10, 100}) {
    std::vector<int> d(static_cast<std::size_t>(n), 1);
    d[0] = n;  // d_max = N, so d_max / h stays near 1/2
    fam.push_back(ModelParams::from_explicit(d, std::vector(static_cast<std::size_t>(2 * n - 1), complete_graph(1))));
  }
  EXPECT_TRUE(check_assumptions(fam, spec).max_degree_flag);
  EXPECT_THROW(check_assumptions({fam[0]}, spec), Error);
}

TEST(ParamsIo, FilesRoundTrip) {
  Catalog cat;
  cat.add("tri", complete_graph(3));
  cat.add("edge", complete_graph(2));
  const auto dir = std::filesystem::temp_directory_path() / "rigc_params_io";
  std::filesystem::create_directories(dir);
  {
    std::ofstream d(dir / "deg.txt"), c(dir / "com.txt");
    d << "# degrees\n2\n2\n\n1\n";
    c << "tri\nedge  # comment\n";
  }
  const auto mp = params_from_files((dir / "deg.txt").string(), (dir / "com.txt").string(), cat);
  EXPECT_EQ(mp.l_degrees(), (std::vector<int>{2, 2, 1}));
  EXPECT_EQ(mp.communities(), (std::vector{complete_graph(3), complete_graph(2)}));
  std::ostringstream names;
  write_community_names(names, mp);
  EXPECT_EQ(names.str(), "tri\nedge\n");
  {
    std::ofstream d(dir / "bad.txt");
    d << "2\nx\n";
  }
  EXPECT_THROW(params_from_files((dir / "bad.txt").string(), (dir / "com.txt").string(), cat), Error);
  EXPECT_THROW(params_from_files((dir / "missing.txt").string(), (dir / "com.txt").string(), cat), Error);
}
