#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "synline/collineations.hpp"
#include "synline/field.hpp"
#include "synline/perm_group.hpp"

using namespace synline;

namespace {

Permutation cyc(std::size_t n, std::vector<std::vector<Index>> cycles) {
  return Permutation::from_cycles(n, cycles);
}

PermGroup sym3() { return PermGroup(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})}); }

PermGroup cyclic4() { return PermGroup(4, {cyc(4, {{0, 1, 2, 3}})}); }

// x -> a x + b over GF(q), acting on the q field elements.
PermGroup affine_group(std::uint64_t q) {
  const auto f = build_field_of_order(q);
  std::vector<Permutation> gens;
  for (std::uint32_t a = 1; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      std::vector<Index> images(q);
      for (std::uint32_t x = 0; x < q; ++x) images[x] = f.add(f.mul(a, x), b);
      gens.emplace_back(std::move(images));
    }
  return PermGroup(q, std::move(gens));
}

// S3 acting on itself by right multiplication.
PermGroup sym3_regular() {
  const auto elems = brute_force_closure(3, sym3().generators(), 10);
  std::vector<Permutation> sorted(elems.begin(), elems.end());
  std::sort(sorted.begin(), sorted.end());
  const auto s3 = sym3();
  std::vector<Permutation> gens;
  for (const auto& g : s3.generators()) {
    std::vector<Index> images(6);
    for (Index i = 0; i < 6; ++i) {
      const auto prod = sorted[i] * g;
      images[i] = static_cast<Index>(std::find(sorted.begin(), sorted.end(), prod) - sorted.begin());
    }
    gens.emplace_back(std::move(images));
  }
  return PermGroup(6, std::move(gens));
}

// Exhaustive: every ordered k-tuple of distinct points hit exactly once.
bool naive_sharply_k(const PermGroup& g, std::size_t k) {
  const auto elems = brute_force_closure(g.degree(), g.generators(), 100000);
  std::set<std::vector<Index>> images;
  for (const auto& e : elems) {
    std::vector<Index> t;
    for (Index i = 0; i < k; ++i) t.push_back(e[i]);
    if (!images.insert(t).second) return false;
  }
  std::size_t tuples = 1;
  for (std::size_t i = 0; i < k; ++i) tuples *= g.degree() - i;
  return images.size() == tuples;
}

}  // namespace

TEST_CASE("permutation products act on the right", "[perm]") {
  const auto a = cyc(3, {{0, 1}});
  const auto b = cyc(3, {{1, 2}});
  CHECK((a * b)[0] == 2);  // 0 -> 1 -> 2
  CHECK((a * b).inverse() * (a * b) == Permutation(3));
  CHECK(cyc(4, {{0, 1, 2, 3}}).power(4).is_identity());
  CHECK(cyc(4, {{0, 1, 2, 3}}).order() == 4);
  CHECK_THROWS_AS(Permutation(std::vector<Index>{0, 0, 1}), Error);
}

TEST_CASE("group orders", "[perm]") {
  CHECK(sym3().order() == 6);
  CHECK(PermGroup::trivial(5).order() == 1);
  CHECK(PermGroup(4, {Permutation(4)}).order() == 1);
  CHECK(cyclic4().order() == 4);
  CHECK(affine_group(5).order() == 20);
  CHECK(affine_group(4).order() == 12);
}

TEST_CASE("chain order equals brute-force closure", "[perm]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 4 + trial % 5;
    std::vector<Permutation> gens;
    for (int k = 0; k < 2; ++k) {
      std::vector<Index> images(n);
      std::iota(images.begin(), images.end(), Index{0});
      // Shuffle only a prefix so that small groups show up too.
      std::shuffle(images.begin(), images.begin() + 2 + (trial + k) % (n - 1), rng);
      gens.emplace_back(std::move(images));
    }
    const PermGroup g(n, gens);
    const auto closure = brute_force_closure(n, gens, 100000);
    CHECK(g.order() == closure.size());
    for (const auto& e : closure) CHECK(g.contains(e));
  }
}

TEST_CASE("Fano collineation group has order 168", "[perm]") {
  const auto g = automorphism_group(build_pg(2));
  CHECK(g.order() == 168);
  CHECK(brute_force_closure(g.combined().degree(), g.combined().generators(), 1000).size() == 168);
}

TEST_CASE("orbits", "[perm]") {
  CHECK(orbits(PermGroup::trivial(3)).size() == 3);
  const PermGroup shift(3, {cyc(3, {{0, 1, 2}})});
  const auto o = orbits(shift);
  REQUIRE(o.size() == 1);
  CHECK(o[0].size() == 3);
  const auto fano = automorphism_group(build_pg(2)).point_action();
  const auto fo = orbits(fano);
  REQUIRE(fo.size() == 1);
  CHECK(fo[0].size() == 7);
  const Index subset[] = {1, 2};
  const PermGroup swap(4, {cyc(4, {{0, 1}, {2, 3}})});
  CHECK(orbits(swap, std::span<const Index>(subset)) == std::vector<std::vector<Index>>{{1}, {2}});
}

TEST_CASE("stabilizers", "[perm]") {
  CHECK(point_stabilizer(sym3(), 0).order() == 2);
  const auto g = automorphism_group(build_pg(2));
  CHECK(point_stabilizer(g.combined(), 0).order() == 24);
  // Elementwise stabilizer of a line and its points: the elations with that axis.
  const auto fano = build_pg(2);
  std::vector<Index> fixed{g.line_vertex(0)};
  for (Index p : fano.points_of_line(0)) fixed.push_back(p);
  CHECK(pointwise_stabilizer(g.combined(), fixed).order() == 4);
  // Setwise line stabilizer equals the stabilizer of the line vertex.
  auto pts = fano.points_of_line(0);
  const std::vector<Index> set(pts.begin(), pts.end());
  const auto setwise = setwise_stabilizer(g.combined(), set);
  CHECK(setwise.order() == 24);
  const auto elems = brute_force_closure(g.combined().degree(), g.combined().generators(), 1000);
  std::size_t naive = 0;
  for (const auto& e : elems)
    naive += std::all_of(set.begin(), set.end(), [&](Index x) {
      return std::find(set.begin(), set.end(), e[x]) != set.end();
    });
  CHECK(setwise.order() == naive);
}

TEST_CASE("orbit-stabilizer on Aut(PG(2,3))", "[perm]") {
  const auto g = automorphism_group(build_pg(3));
  for (Index x : {0u, 5u, 13u, 20u}) {
    const auto orb = g.combined().orbit(x);
    CHECK(orb.size() * point_stabilizer(g.combined(), x).order() == g.order());
  }
}

TEST_CASE("sharp transitivity", "[perm]") {
  CHECK(is_sharply_k_transitive(affine_group(5), 2));
  CHECK(naive_sharply_k(affine_group(5), 2));
  CHECK(is_sharply_k_transitive(cyclic4(), 1));
  CHECK_FALSE(is_sharply_k_transitive(cyclic4(), 2));
  CHECK(is_sharply_k_transitive(sym3(), 3));
  CHECK(naive_sharply_k(sym3(), 3));
  CHECK_FALSE(is_sharply_k_transitive(affine_group(5), 3));
  CHECK(is_sharply_k_transitive(affine_group(4), 2) == naive_sharply_k(affine_group(4), 2));
}

TEST_CASE("prime power degree of sharply 2-transitive groups", "[perm]") {
  const auto r5 = zassenhaus_predicate(affine_group(5));
  CHECK(r5.applicable);
  CHECK(r5.prime_power);
  CHECK(r5.prime == 5);
  CHECK(r5.exponent == 1);
  const auto r4 = zassenhaus_predicate(affine_group(4));
  CHECK(r4.applicable);
  CHECK(r4.prime == 2);
  CHECK(r4.exponent == 2);
  const auto r3 = zassenhaus_predicate(sym3());
  CHECK(r3.applicable);
  CHECK(r3.prime == 3);
  CHECK_FALSE(zassenhaus_predicate(cyclic4()).applicable);
}

TEST_CASE("point stabilizers of natural S3 generate S3", "[perm]") {
  const auto r = point_stabilizer_generation(sym3());
  CHECK(r.equals_group);
  CHECK(r.generated_order == 6);
  CHECK_FALSE(r.witness.has_value());
}

TEST_CASE("regular groups yield a singleton block witness", "[perm]") {
  for (const auto& g : {cyclic4(), sym3_regular()}) {
    const auto r = point_stabilizer_generation(g);
    CHECK_FALSE(r.equals_group);
    CHECK(r.generated_order == 1);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->blocks.size() == g.degree());
    CHECK(r.witness_verified);
    // Independent check: the block action is regular.
    const auto induced = action_on_blocks(g, *r.witness);
    REQUIRE(induced.has_value());
    CHECK(induced->is_transitive());
    CHECK(induced->order() == r.witness->blocks.size());
    CHECK(is_normal_subgroup(r.generated, g));
  }
}

TEST_CASE("generated subgroup is normal", "[perm]") {
  const auto d4 = PermGroup(4, {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{1, 3}})});
  const auto r = point_stabilizer_generation(d4);
  CHECK(is_normal_subgroup(r.generated, d4));
  CHECK(r.generated_order == 4);  // Klein group from the two reflections
  CHECK_FALSE(r.equals_group);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->blocks.size() == 2);
  CHECK(r.witness_verified);
  const auto fano = automorphism_group(build_pg(2)).point_action();
  const auto rf = point_stabilizer_generation(fano);
  CHECK(rf.equals_group);
  CHECK(is_normal_subgroup(rf.generated, fano));
}

TEST_CASE("non-transitive input is rejected", "[perm]") {
  const PermGroup g(4, {cyc(4, {{0, 1}})});
  CHECK_THROWS_AS(point_stabilizer_generation(g), Error);
}

TEST_CASE("block actions reject non-invariant partitions", "[perm]") {
  CHECK_FALSE(action_on_blocks(sym3(), BlockSystem{{{0, 1}, {2}}}).has_value());
}
