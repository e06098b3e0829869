#include <catch_amalgamated.hpp>

#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "synline/free_completion.hpp"

using namespace synline;

namespace {

// Naive free completion on explicit point sets: returns (points, lines)
// after each stage, seed included.
std::vector<std::pair<std::size_t, std::size_t>> naive_counts(const IncidenceStructure& seed, std::size_t n,
                                                              bool lines_first = false) {
  std::size_t np = seed.npoints();
  std::vector<std::set<Index>> lines;
  for (const auto& l : seed.all_lines()) lines.emplace_back(l.begin(), l.end());
  std::vector<std::pair<std::size_t, std::size_t>> out{{np, lines.size()}};
  for (std::size_t k = 1; k <= n; ++k) {
    const bool points = (k % 2 == 1) != lines_first;
    if (points) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t a = 0; a < lines.size(); ++a)
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
          bool meet = false;
          for (Index p : lines[a]) meet = meet || lines[b].count(p);
          if (!meet) pairs.emplace_back(a, b);
        }
      for (auto [a, b] : pairs) {
        lines[a].insert(static_cast<Index>(np));
        lines[b].insert(static_cast<Index>(np));
        ++np;
      }
    } else {
      std::vector<std::pair<Index, Index>> pairs;
      for (Index a = 0; a < np; ++a)
        for (Index b = a + 1; b < np; ++b) {
          bool joined = false;
          for (const auto& l : lines) joined = joined || (l.count(a) && l.count(b));
          if (!joined) pairs.emplace_back(a, b);
        }
      for (auto [a, b] : pairs) lines.push_back({a, b});
    }
    out.emplace_back(np, lines.size());
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> counts(const std::vector<CompletionStage>& st) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : st) out.emplace_back(s.structure.npoints(), s.structure.nlines());
  return out;
}

Collineation order_two_of_ag22(const IncidenceStructure& ag) {
  const auto g = automorphism_group(ag);
  for (const auto& e : g.combined().elements())
    if (e.order() == 2) return g.collineation(e);
  FAIL("no involution");
  return {};
}

}  // namespace

TEST_CASE("free completion of AG(2,2) matches the enumeration oracle", "[completion]") {
  const auto ag = build_ag(2).structure;
  const auto st = free_complete(ag, 4);
  REQUIRE(st.size() == 5);
  CHECK(counts(st) == naive_counts(ag, 4));
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(counts(st)[1] == P{7, 6});
  CHECK(counts(st)[2] == P{7, 9});
  CHECK(counts(st)[3] == P{13, 9});
  for (std::size_t k = 0; k < st.size(); ++k) {
    CHECK(st[k].index == k);
    CHECK(is_partial_linear(st[k].structure));
    CHECK(provenance_sound(st[k]));
    if (k > 0) CHECK(is_prefix_substructure(st[k - 1].structure, st[k].structure));
  }
}

TEST_CASE("free completion of other seeds matches the oracle", "[completion]") {
  const auto pg = build_pg(3);
  const Index m[] = {0};
  const auto seed = remove_elements(pg, pg.points_of_line(0), m).structure;
  CHECK(counts(free_complete(seed, 3)) == naive_counts(seed, 3));
  const auto fano = build_pg(2);
  const Index x[] = {0};
  const auto minus = remove_elements(fano, x, {}).structure;
  CHECK(counts(free_complete(minus, 3)) == naive_counts(minus, 3));
  CHECK(counts(free_complete(desargues_configuration(), 2, true)) ==
        naive_counts(desargues_configuration(), 2, true));
}

TEST_CASE("defining pairs are unique and were free one stage earlier", "[completion]") {
  const auto st = free_complete(build_ag(3).structure, 3);
  for (std::size_t k = 1; k < st.size(); ++k) {
    const auto& prev = st[k - 1].structure;
    const auto& cur = st[k];
    std::set<IndexPair> seen;
    for (Index p = static_cast<Index>(prev.npoints()); p < cur.structure.npoints(); ++p) {
      CHECK(cur.point_birth[p] == k);
      const auto [a, b] = cur.point_pair[p];
      CHECK(prev.common_points(a, b).empty());
      CHECK(seen.insert(cur.point_pair[p]).second);
    }
    for (Index l = static_cast<Index>(prev.nlines()); l < cur.structure.nlines(); ++l) {
      CHECK(cur.line_birth[l] == k);
      const auto [a, b] = cur.line_pair[l];
      CHECK(prev.common_lines(a, b).empty());
      CHECK(seen.insert(cur.line_pair[l]).second);
    }
  }
}

TEST_CASE("element budget stops before an oversized stage", "[completion]") {
  const auto ag = build_ag(2).structure;
  const auto st = free_complete(ag, CompletionBudget{10, 20});
  CHECK(st.size() == 3);
  CHECK(st.back().structure.nelements() <= 20);
}

TEST_CASE("completion errors", "[completion]") {
  CHECK_THROWS_AS(free_complete(build_ag(2).structure, 0), Error);
  const IncidenceStructure doubled(3, {{0, 1}, {0, 1, 2}});
  CHECK_THROWS_AS(free_complete(doubled, 1), Error);
}

TEST_CASE("identity extends to the identity", "[completion]") {
  const auto ag = build_ag(2).structure;
  const auto st = free_complete(ag, 4);
  const auto ext = extend_automorphism(st, identity_collineation(ag));
  REQUIRE(ext.stages.size() == st.size());
  for (const auto& c : ext.stages) {
    CHECK(c.points.is_identity());
    CHECK(c.lines.is_identity());
  }
}

TEST_CASE("an involution of AG(2,2) extends with order 2", "[completion]") {
  const auto ag = build_ag(2).structure;
  const auto st = free_complete(ag, 4);
  const auto alpha = order_two_of_ag22(ag);
  const auto ext = extend_automorphism(st, alpha);
  for (std::size_t k = 0; k < st.size(); ++k) {
    const auto& c = ext.stages[k];
    CHECK(is_collineation(st[k].structure, c));
    CHECK(std::lcm(c.points.order(), c.lines.order()) == 2);
    // Restriction compatibility.
    if (k > 0) {
      const auto& prev = ext.stages[k - 1];
      for (Index p = 0; p < prev.points.degree(); ++p) CHECK(c.points[p] == prev.points[p]);
      for (Index l = 0; l < prev.lines.degree(); ++l) CHECK(c.lines[l] == prev.lines[l]);
    }
  }
}

TEST_CASE("non-automorphisms are rejected", "[completion]") {
  const auto ag = build_ag(2).structure;
  const auto st = free_complete(ag, 1);
  const Collineation bad{Permutation::from_cycles(4, {{0, 1}}), Permutation(6)};
  CHECK_THROWS_AS(extend_automorphism(st, bad), Error);
}

TEST_CASE("Fano pipeline through stage 4", "[completion]") {
  const auto r = fano_pipeline(4);
  CHECK(r.alpha_order == 3);
  CHECK(r.fixes_only_x);
  CHECK(r.uniform_orbits);
  REQUIRE(r.per_stage.size() == 5);
  const auto oracle = naive_counts(r.stages.front().structure, 4);
  for (std::size_t k = 0; k < r.per_stage.size(); ++k) {
    const auto& s = r.per_stage[k];
    CHECK(s.fixed_points == std::vector<Index>{r.seed_x});
    CHECK(s.fixed_lines.empty());
    CHECK(std::pair{s.npoints, s.nlines} == oracle[k]);
    // Direct orbit sweep of the extended map.
    const auto& g = r.extension.stages[k];
    for (Index p = 0; p < s.npoints; ++p)
      if (p != r.seed_x) CHECK(g.points.apply(g.points.apply(p)) != p);
    for (Index p = 0; p < s.npoints; ++p) CHECK(g.points.power(3).apply(p) == p);
    for (Index l = 0; l < s.nlines; ++l) {
      CHECK(g.lines[l] != l);
      CHECK(g.lines.power(3)[l] == l);
    }
  }
  // The seed is AG(2,2) and alpha fixes exactly the anti-flag (x, M).
  CHECK(classify(r.stages.front().structure).tag == PlaneTag::AffinePlane);
  CHECK_FALSE(build_pg(2).incident(r.x, r.m));
}

TEST_CASE("pipeline on PG(2,3) gains fixed elements from swapped pairs", "[completion]") {
  const auto pg = build_pg(3);
  const auto g = automorphism_group(pg);
  CHECK_FALSE(anti_flag_only_element(pg, g, 3).has_value());
  const auto alpha = anti_flag_only_element(pg, g);
  REQUIRE(alpha.has_value());
  CHECK(alpha->points.order() == 4);
  const auto r = anti_flag_pipeline(pg, *alpha, 3);
  CHECK_FALSE(r.fixes_only_x);
  // Every fixed element beyond x was born from a pair that alpha fixes setwise.
  for (std::size_t k = 1; k < r.stages.size(); ++k) {
    const auto& st = r.stages[k];
    const auto& prev = r.extension.stages[k - 1];
    for (Index p : r.per_stage[k].fixed_points) {
      if (st.point_birth[p] == 0) continue;
      const auto [a, b] = st.point_pair[p];
      CHECK(std::set<Index>{prev.lines[a], prev.lines[b]} == std::set<Index>{a, b});
    }
    for (Index l : r.per_stage[k].fixed_lines) {
      if (st.line_birth[l] == 0) continue;
      const auto [a, b] = st.line_pair[l];
      CHECK(std::set<Index>{prev.points[a], prev.points[b]} == std::set<Index>{a, b});
    }
  }
}

TEST_CASE("pipeline on PG(2,4) with an order-5 element", "[completion]") {
  const auto pg = build_pg(4);
  const auto g = automorphism_group(pg);
  const auto alpha = anti_flag_only_element(pg, g, 5);
  REQUIRE(alpha.has_value());
  const auto r = anti_flag_pipeline(pg, *alpha, 2);
  CHECK(r.fixes_only_x);
  CHECK(r.uniform_orbits);
}

TEST_CASE("confinement", "[completion]") {
  CHECK(is_confined(desargues_configuration()));
  CHECK(is_confined(build_pg(2)));
  CHECK(confined_core(build_pg(2)).structure.nelements() == 14);
  const auto ag = build_ag(2).structure;
  CHECK_FALSE(is_confined(ag));
  CHECK(confined_core(ag).structure.nelements() == 0);
  // Idempotence.
  for (const auto& s : {desargues_configuration(), build_ag(3).structure, free_complete(ag, 3).back().structure}) {
    const auto core = confined_core(s).structure;
    const auto again = confined_core(core).structure;
    CHECK(again.npoints() == core.npoints());
    CHECK(again.nlines() == core.nlines());
    if (core.nelements() > 0) CHECK(is_confined(core));
  }
}

TEST_CASE("Desargues configurations embed in PG(2,3) but not PG(2,2)", "[completion]") {
  CHECK(find_subconfigurations(desargues_configuration(), build_pg(3), 1).size() == 1);
  CHECK(find_subconfigurations(desargues_configuration(), build_pg(2), 1).empty());
  CHECK(find_subconfigurations(desargues_configuration(), desargues_configuration(), 200).size() == 120);
}

TEST_CASE("no confined subconfiguration escapes the seed", "[completion]") {
  const auto r = fano_pipeline(3);
  const auto probe = confinement_probe(r.stages);
  REQUIRE(probe.size() == 4);
  for (const auto& p : probe) {
    CHECK(p.core_inside_seed);
    CHECK(p.core_points == 0);
    CHECK(p.desargues_found == 0);
    CHECK_FALSE(p.desargues_outside_seed);
  }
}

TEST_CASE("adding a free point to an affine plane", "[completion]") {
  const auto e2 = extend_by_free_point(build_ag(2).structure, 1);
  CHECK(e2.result().npoints() == 8);
  CHECK(e2.result().nlines() == 14);
  CHECK(counts(e2.stages) == naive_counts(e2.stages.front().structure, 1, true));
  const auto e3 = extend_by_free_point(build_ag(3).structure, 1);
  CHECK(e3.result().npoints() == 14);
  CHECK(e3.result().nlines() == 26);
  const auto e0 = extend_by_free_point(build_ag(2).structure, 0);
  CHECK(e0.result().npoints() == 8);
  CHECK(e0.result().nlines() == 7);
  CHECK(e0.result().lines_of_point(e0.new_point).empty());
  // The line at infinity keeps its points.
  CHECK(e2.result().points_of_line(e2.infinity_line).size() == 3);
  CHECK_THROWS_AS(extend_by_free_point(build_pg(2), 1), Error);
}

TEST_CASE("deleting a point and completing", "[completion]") {
  const auto fano = build_pg(2);
  const auto d = delete_point_and_complete(fano, 0, 2);
  CHECK(counts(d.stages) == std::vector<std::pair<std::size_t, std::size_t>>{{6, 7}, {9, 7}, {9, 13}});
  CHECK(counts(d.stages) == naive_counts(d.stages.front().structure, 2));
  const auto d0 = delete_point_and_complete(fano, 0, 0);
  CHECK(classify(d0.result()).tag == PlaneTag::PartialLinear);
  CHECK(d0.result().npoints() == 6);
  // Iterating: each step contains its predecessor's stage 0.
  const auto d1 = delete_point_and_complete(d.result(), 0, 1);
  CHECK(is_prefix_substructure(d1.stages.front().structure, d1.result()));
  CHECK(is_prefix_substructure(d.stages.front().structure, d.result()));
  CHECK_THROWS_AS(delete_point_and_complete(fano, 7, 1), Error);
}

TEST_CASE("stage dump records births and pairs", "[completion]") {
  const auto st = free_complete(build_ag(2).structure, 1);
  std::ostringstream out;
  write_stage(out, st.back());
  const auto text = out.str();
  CHECK(text.rfind("incidence v1 7 6\n", 0) == 0);
  CHECK(text.find("birth: p4 1\n") != std::string::npos);
  CHECK(text.find("birth: l0 0\n") != std::string::npos);
  CHECK(text.find("pair: p4 l") != std::string::npos);
}

TEST_CASE("cycle histogram", "[completion]") {
  const auto g = Permutation::from_cycles(7, {{0, 1, 2}, {3, 4, 5}});
  const Index skip[] = {6};
  CHECK(cycle_histogram(g, skip) == std::map<std::size_t, std::size_t>{{3, 2}});
  CHECK(cycle_histogram(g) == std::map<std::size_t, std::size_t>{{1, 1}, {3, 2}});
}
