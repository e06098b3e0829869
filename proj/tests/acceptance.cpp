// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "synline/ab_rigidity.hpp"
#include "synline/builtin.hpp"
#include "synline/morphisms.hpp"

using namespace synline;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

struct Criterion {
  const char* name;
  double budget_s;  // 0 means no runtime bound
  std::function<void(Outcome&)> body;
};

// (points, lines) after each naive free-completion stage, seed included.
std::vector<std::pair<std::size_t, std::size_t>> naive_counts(const IncidenceStructure& seed, std::size_t n) {
  std::size_t np = seed.npoints();
  std::vector<std::set<Index>> lines;
  for (const auto& l : seed.all_lines()) lines.emplace_back(l.begin(), l.end());
  std::vector<std::pair<std::size_t, std::size_t>> out{{np, lines.size()}};
  for (std::size_t k = 1; k <= n; ++k) {
    if (k % 2 == 1) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t a = 0; a < lines.size(); ++a)
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
          std::vector<Index> both;
          std::set_intersection(lines[a].begin(), lines[a].end(), lines[b].begin(), lines[b].end(),
                                std::back_inserter(both));
          if (both.empty()) pairs.emplace_back(a, b);
        }
      for (auto [a, b] : pairs) {
        lines[a].insert(static_cast<Index>(np));
        lines[b].insert(static_cast<Index>(np));
        ++np;
      }
    } else {
      std::vector<std::vector<bool>> joined(np, std::vector<bool>(np, false));
      for (const auto& l : lines)
        for (Index a : l)
          for (Index b : l) joined[a][b] = true;
      for (Index a = 0; a < np; ++a)
        for (Index b = a + 1; b < np; ++b)
          if (!joined[a][b]) lines.push_back({a, b});
    }
    out.emplace_back(np, lines.size());
  }
  return out;
}

std::size_t brute_force_fano_collineations() {
  const auto fano = build_pg(2);
  std::set<std::vector<Index>> lines(fano.all_lines().begin(), fano.all_lines().end());
  std::vector<Index> perm(7);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::size_t count = 0;
  do {
    bool ok = true;
    for (const auto& l : fano.all_lines()) {
      std::vector<Index> image;
      for (Index p : l) image.push_back(perm[p]);
      std::sort(image.begin(), image.end());
      ok = ok && lines.count(image);
    }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::size_t naive_oval_count(const IncidenceStructure& plane, std::size_t k) {
  std::vector<bool> pick(plane.npoints(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  std::size_t count = 0;
  do {
    bool ok = true;
    for (Index l = 0; l < plane.nlines(); ++l) {
      std::size_t on = 0;
      for (Index p = 0; p < plane.npoints(); ++p) on += pick[p] && plane.incident(p, l);
      ok = ok && on < 3;
    }
    count += ok;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return count;
}

// Pencil permutations induced by elements fixing mu (and optionally a line).
std::set<Permutation> induced_by_elements(const IncidenceStructure& plane, const CollineationGroup& g, Index mu,
                                          std::optional<Index> line) {
  const auto pencil = plane.lines_of_point(mu);
  std::set<Permutation> out;
  for (const auto& e : g.combined().elements()) {
    const auto c = g.collineation(e);
    if (c.points[mu] != mu || (line && c.lines[*line] != *line)) continue;
    std::vector<Index> images;
    for (Index l : pencil)
      images.push_back(static_cast<Index>(std::find(pencil.begin(), pencil.end(), c.lines[l]) - pencil.begin()));
    out.insert(Permutation(std::move(images)));
  }
  return out;
}

PermGroup regular_sym3() {
  const PermGroup s3(3, {Permutation::from_cycles(3, {{0, 1}}), Permutation::from_cycles(3, {{0, 1, 2}})});
  const auto elems = s3.elements();
  std::vector<Permutation> gens;
  for (const auto& g : s3.generators()) {
    std::vector<Index> images;
    for (const auto& e : elems)
      images.push_back(static_cast<Index>(std::find(elems.begin(), elems.end(), e * g) - elems.begin()));
    gens.emplace_back(std::move(images));
  }
  return PermGroup(elems.size(), std::move(gens));
}

std::uint64_t pgl_order(std::uint64_t q, std::uint64_t h) {
  return q * q * q * (q * q - 1) * (q * q * q - 1) * h;
}

void plane_construction(Outcome& o) {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const auto c = classify(build_pg(q));
    o.require(c.tag == PlaneTag::ProjectivePlane && c.order == q, "PG(2," + std::to_string(q) + ") misclassified");
  }
}

void collineation_groups(Outcome& o) {
  const std::uint64_t hs[] = {1, 1, 2};
  const std::uint64_t expected[] = {168, 5616, 120960};
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t q = i + 2;
    const auto order = automorphism_group(build_pg(q)).order();
    o.require(order == expected[i] && order == pgl_order(q, hs[i]), "order of Aut(PG(2," + std::to_string(q) + "))");
  }
  o.require(brute_force_fano_collineations() == 168, "brute-force Fano count");
}

void fixed_elements(Outcome& o) {
  for (std::uint64_t q : {2u, 3u}) {
    const auto pg = build_pg(q);
    const auto g = automorphism_group(pg);
    for (const auto& e : g.combined().elements()) {
      const auto c = g.collineation(e);
      const auto f = fixed_counts(pg, c);
      o.require(f.points.size() == f.lines.size(), "fixed points differ from fixed lines");
      o.require(incidence_conjugation_check(pg, c), "matrix conjugation check");
    }
  }
}

void anti_flag_transitivity(Outcome& o) {
  std::mt19937 rng(2024);
  for (std::uint64_t q : {2u, 3u, 4u}) {
    const auto pg = build_pg(q);
    const auto g = automorphism_group(pg);
    o.require(anti_flag_orbits(pg, g).count() == 1, "anti-flag orbit count for q=" + std::to_string(q));
    const auto n = static_cast<Index>(pg.npoints());
    auto random_line = [&] {
      for (;;) {
        const Index u = rng() % n, w = rng() % n;
        if (!pg.incident(w, u)) return make_affine_line(pg, u, w);
      }
    };
    for (int i = 0; i < 20; ++i) {
      const auto a = random_line(), b = random_line();
      const auto iso = lines_isomorphic(a, b);
      o.require(iso.isomorphic && iso.witness && is_collineation(pg, *iso.witness) &&
                    iso.witness->points[a.base_point] == b.base_point &&
                    iso.witness->lines[a.deleted_line] == b.deleted_line,
                "random anti-flag pair not isomorphic");
    }
  }
}

void fano_pipeline_check(Outcome& o) {
  const auto r = fano_pipeline(4);
  o.require(r.alpha_order == 3, "alpha has order 3");
  o.require(r.per_stage.size() == 5, "five stage reports");
  const auto oracle = naive_counts(r.stages.front().structure, 4);
  using P = std::pair<std::size_t, std::size_t>;
  o.require(oracle[1] == P{7, 6} && oracle[2] == P{7, 9} && oracle[3] == P{13, 9}, "derived stage sizes");
  for (std::size_t k = 0; k < r.per_stage.size(); ++k) {
    const auto& s = r.per_stage[k];
    o.require(P{s.npoints, s.nlines} == oracle[k], "stage size differs from the oracle at " + std::to_string(k));
    o.require(s.fixed_points == std::vector<Index>{r.seed_x}, "fixed point set at stage " + std::to_string(k));
    o.require(s.fixed_lines.empty(), "fixed line at stage " + std::to_string(k));
    const auto& g = r.extension.stages[k];
    for (Index p = 0; p < s.npoints; ++p)
      if (p != r.seed_x)
        o.require(g.points[p] != p && g.points[g.points[p]] != p && g.points.power(3)[p] == p, "point orbit size");
    for (Index l = 0; l < s.nlines; ++l)
      o.require(g.lines[l] != l && g.lines[g.lines[l]] != l && g.lines.power(3)[l] == l, "line orbit size");
  }
}

void confinement(Outcome& o) {
  o.require(is_confined(desargues_configuration()), "Desargues configuration is confined");
  o.require(confined_core(build_ag(2).structure).structure.nelements() == 0, "core of AG(2,2) is empty");
  const auto r = fano_pipeline(3);
  for (const auto& p : confinement_probe(r.stages)) {
    o.require(!p.desargues_outside_seed, "Desargues configuration meets later stages");
    o.require(p.core_inside_seed, "confined core leaves the seed");
  }
}

void flag_only(Outcome& o) {
  for (std::uint64_t q : {3u, 4u}) {
    const auto pg = build_pg(q);
    const auto g = automorphism_group(pg);
    for (Index y : {Index{0}, Index{1}})
      for (Index x : pg.points_of_line(y)) {
        const auto r = flag_only_automorphism(pg, x, y, g);
        const bool ok = r && fixed_counts(pg, r->product).points.size() == 1 &&
                        fixed_counts(pg, r->product).lines.size() == 1;
        o.require(ok, "fixed counts (1,1) on PG(2," + std::to_string(q) + ")");
      }
  }
  for (std::uint64_t q : {2u, 3u}) {
    const auto pg = build_pg(q);
    const auto g = automorphism_group(pg);
    const auto elems = flag_only_elements(pg, g);
    o.require(!elems.empty(), "flag-only elements exist");
    for (const auto& e : elems) o.require(in_translation_product(pg, g, e.element, e.x, e.y), "not in T(x)T(Y)");
  }
}

void buekenhout(Outcome& o) {
  const auto t = buekenhout_axioms(BuekenhoutFamily::trivial(5));
  o.require(t.all_axioms() && !t.desarguesian, "trivial family");
  for (std::uint64_t q : {2u, 3u}) {
    const auto pg = build_pg(q);
    const auto r = buekenhout_axioms(buekenhout_from_plane(pg, 0, automorphism_group(pg)));
    o.require(r.all_axioms() && r.desarguesian, "family from PG(2," + std::to_string(q) + ")");
  }
}

void point_stabilizers(Outcome& o) {
  const PermGroup s3(3, {Permutation::from_cycles(3, {{0, 1}}), Permutation::from_cycles(3, {{0, 1, 2}})});
  o.require(point_stabilizer_generation(s3).equals_group, "natural S3 is generated");
  const PermGroup c4(4, {Permutation::from_cycles(4, {{0, 1, 2, 3}})});
  for (const auto& g : {c4, regular_sym3()}) {
    const auto r = point_stabilizer_generation(g);
    o.require(!r.equals_group, "regular group is not generated");
    o.require(r.witness.has_value() && r.witness_verified, "witness verified");
    if (!r.witness) continue;
    const auto induced = action_on_blocks(g, *r.witness);
    o.require(induced && is_sharply_k_transitive(*induced, 1), "block action is sharply transitive");
  }
}

void triangle_maps(Outcome& o) {
  const auto fano = build_pg(2);
  const auto f = triangle_epimorphism(fano, Partition2{0, {fano.points_of_line(0)[0]}});
  o.require(is_morphism(f) && is_surjective(f), "Fano map is an epimorphism");
  o.require(fibers(f).point_fibers == std::vector<std::size_t>{1, 2, 4}, "Fano fibers");
  const auto pg3 = build_pg(3);
  const auto on = pg3.points_of_line(0);
  const auto g = triangle_epimorphism(pg3, Partition2{0, {on[0], on[1]}});
  o.require(is_morphism(g) && is_surjective(g), "PG(2,3) map is an epimorphism");
  o.require(fibers(g).point_fibers == std::vector<std::size_t>{2, 2, 9}, "PG(2,3) fibers");
  const auto c2 = compatible_subgroup(f, automorphism_group(fano));
  o.require(c2.closed && c2.group.order() == c2.elements.size(), "Fano compatible subgroup closed");
  const auto c3 = compatible_subgroup(g, automorphism_group(pg3));
  o.require(c3.closed && c3.group.order() == c3.elements.size(), "PG(2,3) compatible subgroup closed");
}

void pencil_arithmetic(Outcome& o) {
  const auto ag = build_ag(2).structure;
  for (Index w = 0; w < ag.npoints(); ++w) {
    const auto a = pencil_group(make_affine_line(ag, w));
    o.require(a.induced_order == 6 && a.kernel_order == 1, "AG(2,2) pencil 6/1");
    o.require(a.source_order == a.kernel_order * a.induced_order, "quotient arithmetic");
  }
  for (const char* src : {"fano", "pg3", "pg4", "hall9", "rigid25"}) {
    const auto s = load_source(src);
    const auto g = automorphism_group(s);
    for (Index mu = 0; mu < std::min<std::size_t>(s.npoints(), 3); ++mu) {
      const auto a = pencil_group(make_projective_line(s, mu), g);
      o.require(a.source_order == a.kernel_order * a.induced_order, std::string("quotient arithmetic on ") + src);
    }
    if (!classify(s).is_projective()) continue;
    for (Index u = 0; u < 2; ++u) {
      Index w = 0;
      while (s.incident(w, u)) ++w;
      const auto a = pencil_group(make_affine_line(s, u, w), g);
      o.require(a.source_order == a.kernel_order * a.induced_order, std::string("quotient arithmetic on ") + src);
    }
  }
}

void inheritance(Outcome& o) {
  for (std::uint64_t q : {2u, 3u}) {
    const auto pg = build_pg(q);
    const auto g = automorphism_group(pg);
    const auto inh = inheritance_check(pg, 0, g);
    const auto gen = generation_check(pg, 0, g);
    o.require(inh.holds && gen.holds, "both questions hold on PG(2," + std::to_string(q) + ")");
    const auto all = induced_by_elements(pg, g, 0, std::nullopt);
    std::set<Permutation> inherited;
    for (Index u = 0; u < pg.nlines(); ++u) {
      if (pg.incident(0, u)) continue;
      const auto part = induced_by_elements(pg, g, 0, u);
      inherited.insert(part.begin(), part.end());
    }
    o.require(all.size() == inh.induced_order && inherited.size() == inh.inherited_count,
              "enumeration cross-check on PG(2," + std::to_string(q) + ")");
  }
  const auto hall = load_source("hall9");
  const auto g = automorphism_group(hall);
  const auto inh = inheritance_check(hall, 0, g);
  const auto gen = generation_check(hall, 0, g);
  std::printf("      order-9 plane, base point 0: inheritance %s, generation %s\n", inh.holds ? "holds" : "fails",
              gen.holds ? "holds" : "fails");
  o.require(inh.induced_order > 0 && gen.induced_order > 0, "order-9 verdicts recorded");
}

void ab_sets(Outcome& o) {
  const auto fano = build_pg(2);
  const auto on = fano.points_of_line(0);
  const auto r = ab_predicates(fano, SubGeometry{{on.begin(), on.end()}, {0}});
  o.require(r.ab1, "AB1 true");
  o.require(!r.ab2 && r.elementwise_order == 4, "AB2 false with elementwise stabilizer of order 4");
  o.require(r.ab2_witness && classify_perspectivity(fano, *r.ab2_witness).kind == PerspectivityKind::Elation,
            "AB2 witness is an elation");
  o.require(!r.ab3, "AB3 false");
  for (std::uint64_t q : {2u, 3u, 4u})
    o.require(rigid_ovals(build_pg(q)).empty(), "no rigid ovals in PG(2," + std::to_string(q) + ")");
  o.require(enumerate_ovals(fano).size() == 28 && naive_oval_count(fano, 3) == 28, "28 ovals in PG(2,2)");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"plane construction", 5, plane_construction},
      {"collineation group orders", 30, collineation_groups},
      {"fixed points equal fixed lines", 0, fixed_elements},
      {"anti-flag transitivity", 0, anti_flag_transitivity},
      {"Fano pipeline", 60, fano_pipeline_check},
      {"confinement", 0, confinement},
      {"flag-only collineations", 0, flag_only},
      {"Buekenhout axioms", 0, buekenhout},
      {"point-stabilizer generation", 0, point_stabilizers},
      {"triangle epimorphisms", 0, triangle_maps},
      {"pencil quotient arithmetic", 0, pencil_arithmetic},
      {"inheritance and generation", 0, inheritance},
      {"AB predicates and ovals", 0, ab_sets},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.budget_s > 0 && secs > c.budget_s) {
      o.ok = false;
      o.note = "over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    failed += !o.ok;
    std::printf("%s %2zu %-32s %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, c.name, secs, o.ok ? "" : "  ",
                o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
