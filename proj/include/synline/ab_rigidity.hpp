#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synline/collineations.hpp"
#include "synline/error.hpp"
#include "synline/free_completion.hpp"
#include "synline/incidence.hpp"
#include "synline/perm_group.hpp"
#include "synline/synthetic_lines.hpp"

namespace synline {

/// Subsets of the points and lines of a host structure. Flags among the
/// kept elements are induced from the host.
struct SubGeometry {
  std::vector<Index> points;
  std::vector<Index> lines;
};

inline SubGeometry normalized(const IncidenceStructure& host, SubGeometry c) {
  for (auto* v : {&c.points, &c.lines}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  for (Index p : c.points)
    if (p >= host.npoints()) throw Error(ErrorCode::BadIndex, "point " + std::to_string(p));
  for (Index l : c.lines)
    if (l >= host.nlines()) throw Error(ErrorCode::BadIndex, "line " + std::to_string(l));
  return c;
}

/// The host with C removed.
inline Restriction complement(const IncidenceStructure& host, const SubGeometry& c) {
  return remove_elements(host, c.points, c.lines);
}

/// Extension of an automorphism of a substructure (given on the
/// substructure's indices) to the host, or nullopt.
inline std::optional<Collineation> extend_to_host(const IncidenceStructure& host, const Restriction& sub,
                                                  const Collineation& beta, const Limits& limits = {}) {
  std::vector<std::pair<Index, Index>> pp, lp;
  for (Index p = 0; p < sub.point_to_parent.size(); ++p)
    pp.emplace_back(sub.point_to_parent[p], sub.point_to_parent[beta.points[p]]);
  for (Index l = 0; l < sub.line_to_parent.size(); ++l)
    lp.emplace_back(sub.line_to_parent[l], sub.line_to_parent[beta.lines[l]]);
  return find_isomorphism(host, host, pp, lp, limits);
}

struct ABReport {
  bool ab1 = false;
  bool ab2 = false;
  bool ab3 = false;
  /// Automorphism of the complement (its own indices) with no extension.
  std::optional<Collineation> ab1_witness;
  /// Nontrivial element fixing C elementwise.
  std::optional<Collineation> ab2_witness;
  /// Element stabilizing C that moves some element of C.
  std::optional<Collineation> ab3_witness;
  std::uint64_t complement_order = 0;   // |Aut(host minus C)|
  std::uint64_t setwise_order = 0;      // |Aut(host)_C|
  std::uint64_t elementwise_order = 0;  // |Aut(host)_[C]|
  /// Extensions are unique: nothing but the identity fixes the complement
  /// elementwise.
  bool extension_unique = false;
};

/// AB1: every automorphism of the complement extends. The extendable ones
/// form the image of the restriction map from Aut(host)_C, a subgroup, so
/// testing the generators decides it.
/// AB2: the elementwise stabilizer of C is trivial.
/// AB3: setwise and elementwise stabilizers of C coincide.
inline ABReport ab_predicates(const IncidenceStructure& host, SubGeometry c, const Limits& limits = {}) {
  c = normalized(host, std::move(c));
  check_size(host.nelements(), limits, "AB predicates");
  const auto rest = complement(host, c);
  if (rest.structure.nelements() == 0) throw Error(ErrorCode::PreconditionFailed, "complement is empty");
  ABReport r;
  const auto sub_group = automorphism_group(rest.structure, limits);
  r.complement_order = sub_group.order();
  r.ab1 = true;
  for (const auto& beta : sub_group.generators()) {
    if (!extend_to_host(host, rest, beta, limits)) {
      r.ab1 = false;
      r.ab1_witness = beta;
      break;
    }
  }
  const auto group = automorphism_group(host, limits);
  std::vector<Index> c_vertices;
  for (Index p : c.points) c_vertices.push_back(group.point_vertex(p));
  for (Index l : c.lines) c_vertices.push_back(group.line_vertex(l));
  const auto elementwise = pointwise_stabilizer(group.combined(), c_vertices);
  r.elementwise_order = elementwise.order();
  r.ab2 = elementwise.is_trivial();
  if (!r.ab2) {
    for (const auto& g : elementwise.generators())
      if (!g.is_identity()) {
        r.ab2_witness = group.collineation(g);
        break;
      }
  }
  const auto setwise = set_stabilizer_group(host, c.points, c.lines, limits);
  r.setwise_order = setwise.order();
  r.ab3 = r.setwise_order == r.elementwise_order;
  if (!r.ab3) {
    for (const auto& g : setwise.combined().generators())
      if (!elementwise.contains(g)) {
        r.ab3_witness = setwise.collineation(g);
        break;
      }
  }
  std::vector<Index> rest_vertices;
  for (Index p : rest.point_to_parent) rest_vertices.push_back(group.point_vertex(p));
  for (Index l : rest.line_to_parent) rest_vertices.push_back(group.line_vertex(l));
  r.extension_unique = pointwise_stabilizer(group.combined(), rest_vertices).is_trivial();
  return r;
}

/// Point set of size order+1 in a projective plane, no three collinear.
struct Oval {
  std::vector<Index> points;  // sorted
};

inline bool no_three_collinear(const IncidenceStructure& plane, const std::vector<Index>& pts) {
  for (Index l = 0; l < plane.nlines(); ++l) {
    std::size_t on = 0;
    for (Index p : pts) on += plane.incident(p, l);
    if (on > 2) return false;
  }
  return true;
}

inline Oval make_oval(const IncidenceStructure& plane, std::vector<Index> points) {
  const auto cls = classify(plane);
  if (!cls.is_projective()) throw Error(ErrorCode::NotAPlane, "oval host is not a projective plane");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (Index p : points)
    if (p >= plane.npoints()) throw Error(ErrorCode::BadIndex, "point " + std::to_string(p));
  if (points.size() != *cls.order + 1)
    throw Error(ErrorCode::InvalidOval, "an oval has order+1 = " + std::to_string(*cls.order + 1) + " points");
  if (!no_three_collinear(plane, points)) throw Error(ErrorCode::InvalidOval, "three points are collinear");
  return Oval{std::move(points)};
}

namespace detail {

/// Extends `seed` (an arc) by points in ascending order to arcs of size k,
/// calling `found` on each. Bitset masks hold the points already on a
/// secant. Throws EnumerationBound past `node_budget` nodes.
template <class Found>
void extend_arcs(const IncidenceStructure& plane, const std::vector<Index>& seed, std::size_t k,
                 std::uint64_t node_budget, Found&& found) {
  const std::size_t n = plane.npoints(), words = (n + 63) / 64;
  using Mask = std::vector<std::uint64_t>;
  std::vector<Mask> line_mask(plane.nlines(), Mask(words, 0));
  for (Index l = 0; l < plane.nlines(); ++l)
    for (Index p : plane.points_of_line(l)) line_mask[l][p / 64] |= std::uint64_t{1} << (p % 64);
  auto blocked = [](const Mask& m, Index p) { return (m[p / 64] >> (p % 64)) & 1; };
  Mask start(words, 0);
  for (std::size_t i = 0; i < seed.size(); ++i) {
    start[seed[i] / 64] |= std::uint64_t{1} << (seed[i] % 64);
    for (std::size_t j = 0; j < i; ++j) {
      const auto& lm = line_mask[plane.join(seed[i], seed[j])];
      for (std::size_t w = 0; w < words; ++w) start[w] |= lm[w];
    }
  }
  std::vector<Index> chosen = seed;
  std::uint64_t nodes = 0;
  auto search = [&](auto&& self, Index from, const Mask& block) -> void {
    if (++nodes > node_budget) throw Error(ErrorCode::EnumerationBound, "oval search node budget exceeded");
    if (chosen.size() == k) {
      found(chosen);
      return;
    }
    std::size_t free = 0;
    for (Index p = from; p < n; ++p) free += !blocked(block, p);
    if (free < k - chosen.size()) return;
    for (Index p = from; p < n; ++p) {
      if (blocked(block, p)) continue;
      Mask next = block;
      for (Index q : chosen) {
        const auto& lm = line_mask[plane.join(p, q)];
        for (std::size_t w = 0; w < words; ++w) next[w] |= lm[w];
      }
      chosen.push_back(p);
      self(self, p + 1, next);
      chosen.pop_back();
    }
  };
  search(search, 0, start);
}

inline std::size_t oval_size(const IncidenceStructure& plane, std::size_t max_order) {
  const auto cls = classify(plane);
  if (!cls.is_projective()) throw Error(ErrorCode::NotAPlane, "oval host is not a projective plane");
  if (*cls.order > max_order) throw Error(ErrorCode::SizeOutOfRange, "plane order above exhaustive range");
  return *cls.order + 1;
}

}  // namespace detail

/// All ovals, by backtracking over ascending point indices.
inline std::vector<Oval> enumerate_ovals(const IncidenceStructure& plane, std::uint64_t node_budget = 50'000'000,
                                         std::size_t max_order = 9) {
  const std::size_t k = detail::oval_size(plane, max_order);
  std::vector<Oval> out;
  detail::extend_arcs(plane, {}, k, node_budget, [&](const std::vector<Index>& pts) {
    Oval o{pts};
    std::sort(o.points.begin(), o.points.end());
    out.push_back(std::move(o));
  });
  return out;
}

/// Representatives of the orbits of Aut(plane) on ordered triangles.
inline std::vector<std::array<Index, 3>> triangle_orbit_representatives(const IncidenceStructure& plane,
                                                                        const CollineationGroup& group) {
  std::vector<std::array<Index, 3>> out;
  const auto pts = group.point_action();
  for (const auto& oa : orbits(pts)) {
    const Index a = oa.front();
    const Index sa[] = {a};
    const auto ga = pointwise_stabilizer(pts, sa);
    for (const auto& ob : orbits(ga)) {
      const Index b = ob.front();
      if (b == a) continue;
      const Index sab[] = {a, b};
      const auto gab = pointwise_stabilizer(pts, sab);
      const Index ab = plane.join(a, b);
      for (const auto& oc : orbits(gab)) {
        const Index c = oc.front();
        if (c == a || c == b || plane.incident(c, ab)) continue;
        out.push_back({a, b, c});
      }
    }
  }
  return out;
}

/// Ovals through each triangle representative. Every Aut-orbit of ovals
/// meets the result; members may repeat across representatives.
inline std::vector<Oval> ovals_up_to_aut(const IncidenceStructure& plane, const CollineationGroup& group,
                                         std::uint64_t node_budget = 200'000'000, std::size_t max_order = 9) {
  const std::size_t k = detail::oval_size(plane, max_order);
  std::set<std::vector<Index>> seen;
  for (const auto& t : triangle_orbit_representatives(plane, group)) {
    detail::extend_arcs(plane, {t[0], t[1], t[2]}, k, node_budget, [&](const std::vector<Index>& pts) {
      std::vector<Index> sorted = pts;
      std::sort(sorted.begin(), sorted.end());
      seen.insert(std::move(sorted));
    });
  }
  std::vector<Oval> out;
  for (const auto& v : seen) out.push_back(Oval{v});
  return out;
}

/// Setwise stabilizer of the oval induces the identity on it.
inline bool is_rigid_oval(const IncidenceStructure& plane, const Oval& oval, const Limits& limits = {}) {
  const auto stab = set_stabilizer_group(plane, oval.points, {}, limits);
  for (const auto& g : stab.combined().generators())
    for (Index p : oval.points)
      if (g[p] != p) return false;
  return true;
}

struct OvalOrbit {
  Oval representative;
  std::vector<std::size_t> members;  // indices into the oval list
  std::size_t size = 0;
  std::uint64_t stabilizer_order = 0;
  bool rigid = false;
};

/// Orbits of Aut(plane) on a list of ovals closed under the group (as
/// produced by enumerate_ovals), each with its rigidity verdict.
inline std::vector<OvalOrbit> oval_orbits(const IncidenceStructure& plane, const std::vector<Oval>& ovals,
                                          const CollineationGroup& group, const Limits& limits = {}) {
  std::map<std::vector<Index>, std::size_t> index;
  for (std::size_t i = 0; i < ovals.size(); ++i) index.emplace(ovals[i].points, i);
  std::vector<bool> seen(ovals.size(), false);
  std::vector<OvalOrbit> out;
  const auto gens = group.combined().generators();
  for (std::size_t i = 0; i < ovals.size(); ++i) {
    if (seen[i]) continue;
    seen[i] = true;
    std::vector<std::size_t> queue{i};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (const auto& g : gens) {
        std::vector<Index> img;
        for (Index p : ovals[queue[h]].points) img.push_back(g[p]);
        std::sort(img.begin(), img.end());
        auto it = index.find(img);
        if (it == index.end()) throw Error(ErrorCode::PreconditionFailed, "oval list is not closed under the group");
        if (!seen[it->second]) {
          seen[it->second] = true;
          queue.push_back(it->second);
        }
      }
    }
    OvalOrbit o;
    o.representative = ovals[i];
    o.members = queue;
    std::sort(o.members.begin(), o.members.end());
    o.size = queue.size();
    o.stabilizer_order = group.order() / o.size;
    o.rigid = is_rigid_oval(plane, ovals[i], limits);
    out.push_back(std::move(o));
  }
  return out;
}

/// Ovals whose setwise stabilizer induces only the identity on them.
inline std::vector<Oval> rigid_ovals(const IncidenceStructure& plane, const Limits& limits = {}) {
  const auto ovals = enumerate_ovals(plane);
  const auto group = automorphism_group(plane, limits);
  std::vector<Oval> out;
  std::vector<std::size_t> keep;
  for (const auto& orbit : oval_orbits(plane, ovals, group, limits))
    if (orbit.rigid) keep.insert(keep.end(), orbit.members.begin(), orbit.members.end());
  std::sort(keep.begin(), keep.end());
  for (std::size_t i : keep) out.push_back(ovals[i]);
  return out;
}

struct RigidOvalReport {
  ABReport ab;
  /// Every automorphism of the complement sends the secants through each
  /// oval point to lines meeting again in one oval point.
  bool secant_argument = false;
  bool complement_confined = false;
};

inline RigidOvalReport rigid_oval_ab_check(const IncidenceStructure& plane, const Oval& oval,
                                           const Limits& limits = {}) {
  const auto o = make_oval(plane, oval.points);
  if (!is_rigid_oval(plane, o, limits)) throw Error(ErrorCode::NotRigid, "oval stabilizer acts nontrivially");
  RigidOvalReport r;
  const SubGeometry c{o.points, {}};
  r.ab = ab_predicates(plane, c, limits);
  const auto rest = complement(plane, c);
  r.complement_confined = is_confined(rest.structure);
  const auto sub_group = automorphism_group(rest.structure, limits);
  r.secant_argument = true;
  for (const auto& beta : sub_group.generators()) {
    for (Index x : o.points) {
      std::vector<Index> meet_all;
      bool first = true;
      for (Index l : plane.lines_of_point(x)) {
        const Index image = rest.line_to_parent[beta.lines[rest.line_from_parent[l]]];
        auto on = plane.points_of_line(image);
        std::vector<Index> pts(on.begin(), on.end());
        if (first) meet_all = pts, first = false;
        else {
          std::vector<Index> both;
          std::set_intersection(meet_all.begin(), meet_all.end(), pts.begin(), pts.end(), std::back_inserter(both));
          meet_all = std::move(both);
        }
      }
      if (meet_all.size() != 1 || !std::binary_search(o.points.begin(), o.points.end(), meet_all[0]))
        r.secant_argument = false;
    }
  }
  return r;
}

struct RigidityProfile {
  bool line_at_infinity_rigid = false;
  std::vector<bool> per_point;  // indexed by affine point
  bool all_points_rigid = false;
};

/// For each affine point omega: is the induced pencil group of (A, omega)
/// trivial? For the line at infinity U: does Aut(completion)_U induce the
/// identity on U's points?
inline RigidityProfile rigidity_profile(const IncidenceStructure& affine, const Limits& limits = {}) {
  if (!classify(affine).is_affine()) throw Error(ErrorCode::NotAffine, "input is not an affine plane");
  const auto [plane, u] = complete_affine(affine);
  check_size(plane.nelements(), limits, "rigidity profile");
  const auto group = automorphism_group(plane, limits);
  RigidityProfile r;
  r.all_points_rigid = true;
  for (Index w = 0; w < affine.npoints(); ++w) {
    const bool rigid = pencil_group(make_affine_line(plane, u, w), group).induced_order == 1;
    r.per_point.push_back(rigid);
    r.all_points_rigid = r.all_points_rigid && rigid;
  }
  const Index uv[] = {group.line_vertex(u)};
  const auto stab = pointwise_stabilizer(group.combined(), uv);
  r.line_at_infinity_rigid = true;
  for (const auto& g : stab.generators())
    for (Index p : plane.points_of_line(u))
      if (g[p] != p) r.line_at_infinity_rigid = false;
  return r;
}

struct StageEvidence {
  std::size_t stage = 0;
  std::size_t npoints = 0;
  std::size_t nlines = 0;
  std::uint64_t aut_order = 0;
};

struct SeedReport {
  Restriction seed;
  bool confined = false;
  bool rigid = false;
  bool certified = false;  // confined and rigid
  /// Stage-n evidence: automorphism group orders of truncated completions
  /// of a certified seed.
  std::vector<StageEvidence> evidence;
};

inline SeedReport rigid_plane_seed(const IncidenceStructure& host, SubGeometry c, std::size_t stages = 0,
                                   const Limits& limits = {}) {
  c = normalized(host, std::move(c));
  SeedReport r;
  r.seed = complement(host, c);
  r.confined = is_confined(r.seed.structure);
  r.rigid = automorphism_group(r.seed.structure, limits).order() == 1;
  r.certified = r.confined && r.rigid;
  if (r.certified && stages > 0) {
    for (const auto& st : free_complete(r.seed.structure, stages, false, limits)) {
      r.evidence.push_back({st.index, st.structure.npoints(), st.structure.nlines(),
                            automorphism_group(st.structure, limits).order()});
    }
  }
  return r;
}

}  // namespace synline
