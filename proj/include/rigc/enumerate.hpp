#pragma once

// Exhaustive mode: every one of the h! bijections of a tiny instance, with
// exact rational tables of the finite-n statistics. The same tally type
// accumulates sampled matchings, so sampled and exact tables line up.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rigc/bcm.hpp"
#include "rigc/error.hpp"
#include "rigc/projection.hpp"
#include "rigc/stats.hpp"

namespace rigc {

inline constexpr std::size_t kDefaultEnumerationBound = 8;

/// Per-statistic value counts. Statistics observed once per vertex (or per
/// pair) contribute that many observations per matching, so probabilities are
/// averages over vertices (pairs) and matchings.
class StatTally {
 public:
  void observe(const BipartiteMatching& m) {
    const ProjectedGraph g = project(m, false);
    const std::size_t n = m.l_count(), mm = m.r_count();
    const auto tri = triangle_counts(g);
    for (std::uint32_t v = 0; v < n; ++v) {
      add("self_loops", g.self_loops(v));
      add("p_degree", static_cast<long long>(g.degree(v)));
      const std::uint64_t w = choose2(g.degree(v));
      add("clustering", w ? Rational(static_cast<long long>(tri[v]), static_cast<long long>(w)) : Rational(0));
      for (std::uint32_t u = v + 1; u < n; ++u) add("X", g.multiplicity(v, u));
    }
    const OverlapCensus c = overlap_census(m);
    for (std::uint32_t a = 0; a < mm; ++a)
      for (std::uint32_t b = a + 1; b < mm; ++b) add("overlap", c.overlap(a, b));
    add("L1", static_cast<long long>(c.level(1)));
    add("L2", static_cast<long long>(c.level(2)));
    add("mean_neighbors", Rational(2 * static_cast<long long>(c.level(1)), static_cast<long long>(mm)));
    add("self_loop_total", static_cast<long long>(g.self_loop_total()));
    add("multi_edge_pairs", static_cast<long long>(g.multi_edge_pairs()));
    for (char x : vertex_overlap_indicators(m, c)) add("vertex_indicator", x);
    for (char x : community_multi_overlap_indicators(c)) add("community_indicator", x);
    ++draws_;
  }

  std::uint64_t draws() const { return draws_; }
  const std::map<std::string, std::map<Rational, std::uint64_t>>& counts() const { return counts_; }

  /// Observations per matching; zero for statistics with no observations.
  std::uint64_t per_draw(const std::string& stat) const {
    auto it = counts_.find(stat);
    if (it == counts_.end() || draws_ == 0) return 0;
    std::uint64_t t = 0;
    for (const auto& [v, c] : it->second) t += c;
    return t / draws_;
  }

  Rational probability(const std::string& stat, const Rational& value) const {
    const auto it = counts_.find(stat);
    if (it == counts_.end()) return Rational(0);
    const auto jt = it->second.find(value);
    if (jt == it->second.end()) return Rational(0);
    return Rational(static_cast<long long>(jt->second), static_cast<long long>(draws_ * per_draw(stat)));
  }

  double frequency(const std::string& stat, const Rational& value) const {
    return boost::rational_cast<double>(probability(stat, value));
  }

  Rational expectation(const std::string& stat) const {
    const auto it = counts_.find(stat);
    if (it == counts_.end()) return Rational(0);
    Rational s(0);
    for (const auto& [v, c] : it->second) s += v * Rational(static_cast<long long>(c));
    return s / Rational(static_cast<long long>(draws_ * per_draw(stat)));
  }

 private:
  void add(const std::string& stat, const Rational& value) { ++counts_[stat][value]; }
  void add(const std::string& stat, long long value) { add(stat, Rational(value)); }
  void add(const std::string& stat, std::uint32_t value) { add(stat, Rational(static_cast<long long>(value))); }
  void add(const std::string& stat, char value) { add(stat, Rational(static_cast<long long>(value))); }

  std::map<std::string, std::map<Rational, std::uint64_t>> counts_;
  std::uint64_t draws_ = 0;
};

/// Calls f(matching) for each of the h! bijections.
template <typename F>
void for_each_matching(const ModelParams& params, F&& f, std::size_t bound = kDefaultEnumerationBound) {
  const std::size_t h = params.half_edges();
  if (h > bound)
    throw Error(ErrorCode::InvalidArgument,
                "exhaustive enumeration refused: h = " + std::to_string(h) + " exceeds bound " + std::to_string(bound));
  std::vector<HalfEdge> perm(h);
  std::iota(perm.begin(), perm.end(), HalfEdge{0});
  do {
    f(BipartiteMatching(params, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline StatTally enumerate_statistics(const ModelParams& params, std::size_t bound = kDefaultEnumerationBound) {
  StatTally t;
  for_each_matching(params, [&](const BipartiteMatching& m) { t.observe(m); }, bound);
  return t;
}

inline StatTally sample_statistics(const ModelParams& params, std::size_t draws, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  StatTally t;
  for (std::size_t i = 0; i < draws; ++i) t.observe(sample_uniform_matching(params, rng));
  return t;
}

inline std::string to_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline nlohmann::ordered_json to_json(const StatTally& t) {
  nlohmann::ordered_json j;
  j["matchings"] = t.draws();
  for (const auto& [stat, values] : t.counts()) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [v, c] : values) rows.push_back({{"value", to_string(v)}, {"probability", to_string(t.probability(stat, v))}});
    j["statistics"][stat] = {{"expectation", to_string(t.expectation(stat))}, {"law", rows}};
  }
  return j;
}

inline void write_text(std::ostream& out, const StatTally& t) {
  out << "matchings " << t.draws() << '\n';
  for (const auto& [stat, values] : t.counts()) {
    out << '\n' << '[' << stat << "] E = " << to_string(t.expectation(stat)) << '\n';
    for (const auto& [v, c] : values) out << "  " << to_string(v) << '\t' << to_string(t.probability(stat, v)) << '\n';
  }
}

}  // namespace rigc
