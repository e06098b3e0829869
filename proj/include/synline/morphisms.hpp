#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "synline/collineations.hpp"
#include "synline/error.hpp"
#include "synline/incidence.hpp"
#include "synline/io.hpp"
#include "synline/perm_group.hpp"

namespace synline {

/// Point and line maps between two structures. Owns copies of both ends.
struct GeometryMorphism {
  IncidenceStructure source;
  IncidenceStructure target;
  std::vector<Index> point_map;
  std::vector<Index> line_map;

  MorphismMaps maps() const { return {point_map, line_map}; }
};

inline bool maps_in_range(const GeometryMorphism& f) {
  if (f.point_map.size() != f.source.npoints() || f.line_map.size() != f.source.nlines()) return false;
  for (Index p : f.point_map)
    if (p >= f.target.npoints()) return false;
  for (Index l : f.line_map)
    if (l >= f.target.nlines()) return false;
  return true;
}

/// p on L implies p^f on L^f.
inline bool preserves_incidence(const GeometryMorphism& f) {
  if (!maps_in_range(f)) return false;
  for (Index l = 0; l < f.source.nlines(); ++l)
    for (Index p : f.source.points_of_line(l))
      if (!f.target.incident(f.point_map[p], f.line_map[l])) return false;
  return true;
}

/// Disjoint source lines go to disjoint or equal target lines.
inline bool preserves_parallelism(const GeometryMorphism& f) {
  for (Index a = 0; a < f.source.nlines(); ++a)
    for (Index b = a + 1; b < f.source.nlines(); ++b) {
      if (!f.source.common_points(a, b).empty()) continue;
      const Index fa = f.line_map[a], fb = f.line_map[b];
      if (fa != fb && !f.target.common_points(fa, fb).empty()) return false;
    }
  return true;
}

/// Incidence preserving, and between affine planes also parallelism preserving.
inline bool is_morphism(const GeometryMorphism& f) {
  if (!preserves_incidence(f)) return false;
  if (classify(f.source).is_affine() && classify(f.target).is_affine()) return preserves_parallelism(f);
  return true;
}

inline GeometryMorphism make_morphism(const IncidenceStructure& source, const IncidenceStructure& target,
                                      const MorphismMaps& maps) {
  GeometryMorphism f{source, target, maps.point_map, maps.line_map};
  if (!maps_in_range(f)) throw Error(ErrorCode::BadIndex, "morphism maps are not total or out of range");
  if (!preserves_incidence(f)) throw Error(ErrorCode::PreconditionFailed, "map does not preserve incidence");
  return f;
}

/// Closure of a set of points and lines under joins and meets.
inline Restriction closure(const IncidenceStructure& s, const std::vector<Index>& points,
                           const std::vector<Index>& lines) {
  std::vector<bool> kp(s.npoints(), false), kl(s.nlines(), false);
  std::vector<Index> pts, lns;
  for (Index p : points)
    if (!kp[p]) kp[p] = true, pts.push_back(p);
  for (Index l : lines)
    if (!kl[l]) kl[l] = true, lns.push_back(l);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const Index l = s.join(pts[i], pts[j]);
        if (l != kNone && !kl[l]) kl[l] = true, lns.push_back(l), grew = true;
      }
    for (std::size_t i = 0; i < lns.size(); ++i)
      for (std::size_t j = i + 1; j < lns.size(); ++j) {
        const Index p = s.meet(lns[i], lns[j]);
        if (p != kNone && !kp[p]) kp[p] = true, pts.push_back(p), grew = true;
      }
  }
  return restrict_to(s, kp, kl);
}

struct EmbeddingReport {
  bool embedding = false;
  /// Order of the projective subplane generated by the image, when the
  /// target is a projective plane and the closure is one.
  std::optional<std::size_t> subplane_order;
};

/// Injective on points and lines with incidence preserved and reflected.
inline EmbeddingReport is_embedding(const GeometryMorphism& f) {
  EmbeddingReport r;
  if (!preserves_incidence(f)) return r;
  auto injective = [](std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!injective(f.point_map) || !injective(f.line_map)) return r;
  for (Index l = 0; l < f.source.nlines(); ++l)
    for (Index p = 0; p < f.source.npoints(); ++p)
      if (f.target.incident(f.point_map[p], f.line_map[l]) != f.source.incident(p, l)) return r;
  r.embedding = true;
  if (classify(f.target).is_projective()) {
    const auto c = closure(f.target, f.point_map, f.line_map);
    const auto cls = classify(c.structure);
    if (cls.is_projective()) r.subplane_order = cls.order;
  }
  return r;
}

namespace detail {

/// Source points ordered so that a quadrangle (lexicographically least)
/// comes first, followed by points in the order they arise as meets of
/// joins; leftovers last.
inline std::vector<Index> quadrangle_order(const IncidenceStructure& s) {
  const Index n = static_cast<Index>(s.npoints());
  auto collinear = [&](Index a, Index b, Index c) {
    const Index l = s.join(a, b);
    return l != kNone && s.incident(c, l);
  };
  std::vector<Index> order;
  for (Index a = 0; a < n && order.empty(); ++a)
    for (Index b = a + 1; b < n && order.empty(); ++b)
      for (Index c = b + 1; c < n && order.empty(); ++c) {
        if (collinear(a, b, c)) continue;
        for (Index d = c + 1; d < n; ++d)
          if (!collinear(a, b, d) && !collinear(a, c, d) && !collinear(b, c, d)) {
            order = {a, b, c, d};
            break;
          }
      }
  if (order.empty()) {
    for (Index p = 0; p < n; ++p) order.push_back(p);
    return order;
  }
  std::vector<bool> placed(n, false);
  for (Index p : order) placed[p] = true;
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<bool> known_line(s.nlines(), false);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const Index l = s.join(order[i], order[j]);
        if (l != kNone) known_line[l] = true;
      }
    for (Index p = 0; p < n; ++p) {
      if (placed[p]) continue;
      std::size_t known = 0;
      for (Index l : s.lines_of_point(p)) known += known_line[l];
      if (known >= 2) {
        order.push_back(p);
        placed[p] = true;
        grew = true;
        break;
      }
    }
  }
  for (Index p = 0; p < n; ++p)
    if (!placed[p]) order.push_back(p);
  return order;
}

}  // namespace detail

/// Backtracking search for embeddings of `source` into `target`. Every
/// source line needs at least two points; each line goes to the join of the
/// images of two of its points. With `keep_parallel`, disjoint source lines
/// must map to disjoint lines (morphisms of affine planes).
inline std::vector<GeometryMorphism> find_embeddings(const IncidenceStructure& source,
                                                     const IncidenceStructure& target,
                                                     bool keep_parallel, std::size_t limit = 1) {
  for (Index l = 0; l < source.nlines(); ++l)
    if (source.points_of_line(l).size() < 2)
      throw Error(ErrorCode::PreconditionFailed, "source line with fewer than two points");
  const auto order = detail::quadrangle_order(source);
  std::vector<Index> rank(source.npoints());
  for (Index i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::vector<GeometryMorphism> found;
  std::vector<Index> pmap(source.npoints(), kNone), lmap(source.nlines(), kNone);
  std::vector<bool> used_p(target.npoints(), false), used_l(target.nlines(), false);

  auto line_ok = [&](Index l, Index image) {
    if (used_l[image]) return false;
    for (Index p : source.points_of_line(l))
      if (pmap[p] != kNone && !target.incident(pmap[p], image)) return false;
    for (Index p = 0; p < source.npoints(); ++p)
      if (pmap[p] != kNone && !source.incident(p, l) && target.incident(pmap[p], image)) return false;
    if (keep_parallel) {
      for (Index m = 0; m < source.nlines(); ++m) {
        if (lmap[m] == kNone || m == l) continue;
        const bool disjoint = source.common_points(l, m).empty();
        if (disjoint && !target.common_points(image, lmap[m]).empty()) return false;
      }
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t depth) -> void {
    if (found.size() >= limit) return;
    if (depth == order.size()) {
      GeometryMorphism f{source, target, pmap, lmap};
      if (is_embedding(f).embedding) found.push_back(std::move(f));
      return;
    }
    const Index p = order[depth];
    for (Index h = 0; h < target.npoints(); ++h) {
      if (used_p[h]) continue;
      bool ok = true;
      for (Index l : source.lines_of_point(p))
        if (lmap[l] != kNone && !target.incident(h, lmap[l])) ok = false;
      for (Index l = 0; l < source.nlines() && ok; ++l)
        if (lmap[l] != kNone && !source.incident(p, l) && target.incident(h, lmap[l])) ok = false;
      if (!ok) continue;
      pmap[p] = h;
      used_p[h] = true;
      std::vector<Index> newly;
      for (Index l : source.lines_of_point(p)) {
        if (lmap[l] != kNone) continue;
        Index other = kNone;
        for (Index r : source.points_of_line(l))
          if (r != p && pmap[r] != kNone && rank[r] < depth) other = r;
        if (other == kNone) continue;
        const Index j = target.join(h, pmap[other]);
        if (j == kNone || !line_ok(l, j)) {
          ok = false;
          break;
        }
        lmap[l] = j;
        used_l[j] = true;
        newly.push_back(l);
      }
      if (ok) self(self, depth + 1);
      for (Index l : newly) {
        used_l[lmap[l]] = false;
        lmap[l] = kNone;
      }
      used_p[h] = false;
      pmap[p] = kNone;
      if (found.size() >= limit) return;
    }
  };
  search(search, 0);
  return found;
}

inline std::optional<GeometryMorphism> find_embedding(const IncidenceStructure& source,
                                                      const IncidenceStructure& target) {
  const bool affine = classify(source).is_affine() && classify(target).is_affine();
  auto all = find_embeddings(source, target, affine, 1);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

struct SubfieldVerdict {
  std::size_t subplane_order = 0;  // order of the closure of the image
  std::size_t target_order = 0;
  bool subfield = false;           // target order is a power of the subplane order
};

inline bool is_power_of(std::size_t q, std::size_t m) {
  if (m < 2) return false;
  while (q % m == 0) q /= m;
  return q == 1;
}

/// For an embedding of an affine plane into a Desarguesian affine plane:
/// the closure of the image inside the projective completion of the target
/// is PG(2,m), and q is a power of m.
inline SubfieldVerdict subfield_subline_check(const GeometryMorphism& f) {
  if (!is_embedding(f).embedding) throw Error(ErrorCode::NotAnEmbedding, "map is not an embedding");
  const auto tcls = classify(f.target);
  if (!tcls.is_affine()) throw Error(ErrorCode::NotAffine, "target is not an affine plane");
  const auto completion = complete_affine(f.target).first;
  const auto c = closure(completion, f.point_map, f.line_map);
  const auto cls = classify(c.structure);
  if (!cls.is_projective()) throw Error(ErrorCode::PreconditionFailed, "image closure is not a projective plane");
  SubfieldVerdict v;
  v.subplane_order = *cls.order;
  v.target_order = *tcls.order;
  v.subfield = is_power_of(v.target_order, v.subplane_order);
  return v;
}

/// Two-part partition of the points of a line: part_a given, the rest is B.
struct Partition2 {
  Index line = 0;
  std::vector<Index> part_a;
};

/// Epimorphism onto the thin triangle: A -> 0, B -> 1, points off L -> 2;
/// L -> line {0,1}, lines meeting L in B -> {1,2}, lines meeting L in A ->
/// {0,2}.
inline GeometryMorphism triangle_epimorphism(const IncidenceStructure& plane, const Partition2& part) {
  if (!classify(plane).is_projective()) throw Error(ErrorCode::NotAPlane, "input is not a projective plane");
  if (part.line >= plane.nlines()) throw Error(ErrorCode::BadIndex, "line " + std::to_string(part.line));
  const auto on_l = plane.points_of_line(part.line);
  std::vector<Index> a = part.part_a;
  std::sort(a.begin(), a.end());
  if (a.empty() || a.size() >= on_l.size() || std::adjacent_find(a.begin(), a.end()) != a.end())
    throw Error(ErrorCode::BadPartition, "both parts must be nonempty and disjoint");
  for (Index p : a)
    if (p >= plane.npoints() || !plane.incident(p, part.line))
      throw Error(ErrorCode::BadPartition, "point " + std::to_string(p) + " is not on the line");
  GeometryMorphism f{plane, triangle(), std::vector<Index>(plane.npoints(), 2),
                     std::vector<Index>(plane.nlines(), kNone)};
  for (Index p : on_l) f.point_map[p] = std::binary_search(a.begin(), a.end(), p) ? 0 : 1;
  for (Index l = 0; l < plane.nlines(); ++l) {
    if (l == part.line) {
      f.line_map[l] = 0;
      continue;
    }
    const Index x = plane.meet(l, part.line);
    f.line_map[l] = f.point_map[x] == 0 ? 2 : 1;
  }
  if (!preserves_incidence(f)) throw Error(ErrorCode::PreconditionFailed, "triangle map lost a flag");
  return f;
}

/// The dual class: partition of the lines through a point. Built from the
/// primal construction on the dual plane.
inline GeometryMorphism triangle_epimorphism_dual(const IncidenceStructure& plane, Index point,
                                                  const std::vector<Index>& lines_a) {
  const auto d = triangle_epimorphism(dual(plane), Partition2{point, lines_a});
  return GeometryMorphism{plane, dual(d.target), d.line_map, d.point_map};
}

inline bool is_surjective(const GeometryMorphism& f) {
  std::vector<bool> hp(f.target.npoints(), false), hl(f.target.nlines(), false);
  for (Index p : f.point_map) hp[p] = true;
  for (Index l : f.line_map) hl[l] = true;
  return std::all_of(hp.begin(), hp.end(), [](bool b) { return b; }) &&
         std::all_of(hl.begin(), hl.end(), [](bool b) { return b; });
}

struct FiberReport {
  std::vector<std::size_t> point_fibers;  // size of the fiber over each target point
  std::vector<std::size_t> line_fibers;
};

inline FiberReport fibers(const GeometryMorphism& f) {
  FiberReport r{std::vector<std::size_t>(f.target.npoints(), 0), std::vector<std::size_t>(f.target.nlines(), 0)};
  for (Index p : f.point_map) ++r.point_fibers[p];
  for (Index l : f.line_map) ++r.line_fibers[l];
  return r;
}

struct EpimorphismVerdict {
  bool isomorphism = false;
  FiberReport fibers;  // all ones when isomorphism
};

/// Finite form of the epimorphism dichotomy: a surjective morphism between
/// finite thick projective planes is an isomorphism. A non-bijective input
/// is reported with its fibers.
inline EpimorphismVerdict epimorphism_classify(const GeometryMorphism& f) {
  if (!preserves_incidence(f)) throw Error(ErrorCode::PreconditionFailed, "map does not preserve incidence");
  if (!is_surjective(f)) throw Error(ErrorCode::NotSurjective, "map is not surjective");
  if (!classify(f.source).is_projective()) throw Error(ErrorCode::PreconditionFailed, "source is not a thick projective plane");
  if (!classify(f.target).is_projective()) throw Error(ErrorCode::PreconditionFailed, "target is not a thick projective plane");
  EpimorphismVerdict v;
  v.fibers = fibers(f);
  auto ones = [](const std::vector<std::size_t>& v) {
    return std::all_of(v.begin(), v.end(), [](std::size_t n) { return n == 1; });
  };
  v.isomorphism = ones(v.fibers.point_fibers) && ones(v.fibers.line_fibers);
  return v;
}

/// alpha (on the source, combined domain) and its inverse send every point
/// fiber into a point fiber and every line fiber into a line fiber.
inline bool is_compatible(const GeometryMorphism& f, const Collineation& alpha) {
  auto maps_fibers = [](const std::vector<Index>& phi, const Permutation& g) {
    std::vector<Index> fiber_image;  // target element -> image fiber
    std::size_t n = 0;
    for (Index v : phi) n = std::max<std::size_t>(n, v + 1);
    fiber_image.assign(n, kNone);
    for (Index x = 0; x < phi.size(); ++x) {
      Index& slot = fiber_image[phi[x]];
      const Index img = phi[g[x]];
      if (slot == kNone) slot = img;
      else if (slot != img) return false;
    }
    return true;
  };
  const Collineation inv{alpha.points.inverse(), alpha.lines.inverse()};
  return maps_fibers(f.point_map, alpha.points) && maps_fibers(f.line_map, alpha.lines) &&
         maps_fibers(f.point_map, inv.points) && maps_fibers(f.line_map, inv.lines);
}

struct CompatibleSubgroup {
  std::vector<Permutation> elements;  // combined domain of the source, sorted
  PermGroup group;                    // generated by `elements`
  bool closed = false;                // closure under products and inverses verified on all elements
  PermGroup induced;                  // action on the combined domain of the target
};

/// C(f): elements of G compatible with the fibers of f, by full enumeration.
inline CompatibleSubgroup compatible_subgroup(const GeometryMorphism& f, const CollineationGroup& group,
                                              const Limits& limits = {}) {
  if (group.order() > limits.max_enumeration) {
    throw Error(ErrorCode::EnumerationBound, "group order " + std::to_string(group.order()) + " exceeds bound");
  }
  CompatibleSubgroup r;
  for (const auto& e : group.combined().elements(limits.max_enumeration))
    if (is_compatible(f, group.collineation(e))) r.elements.push_back(e);
  const std::set<Permutation> members(r.elements.begin(), r.elements.end());
  r.closed = true;
  for (const auto& a : r.elements) {
    if (!members.count(a.inverse())) r.closed = false;
    for (const auto& b : r.elements)
      if (!members.count(a * b)) {
        r.closed = false;
        break;
      }
    if (!r.closed) break;
  }
  const std::size_t degree = f.source.nelements();
  r.group = PermGroup(degree, r.elements);
  const std::size_t tp = f.target.npoints(), tdeg = f.target.nelements();
  std::vector<Permutation> induced;
  for (const auto& e : r.elements) {
    std::vector<Index> img(tdeg);
    for (Index z = 0; z < tdeg; ++z) img[z] = z;
    for (Index p = 0; p < f.source.npoints(); ++p) img[f.point_map[p]] = f.point_map[e[p]];
    for (Index l = 0; l < f.source.nlines(); ++l)
      img[tp + f.line_map[l]] = static_cast<Index>(tp + f.line_map[e[f.source.npoints() + l] - f.source.npoints()]);
    induced.emplace_back(std::move(img));
  }
  r.induced = PermGroup(tdeg, induced);
  return r;
}

struct ImageReport {
  Restriction image;  // induced on the target
  PlaneClass cls;
  /// Pairs of image lines (target indices) whose meet is not an image point.
  std::vector<std::pair<Index, Index>> missing_intersections;
};

inline ImageReport image_structure(const GeometryMorphism& f) {
  std::vector<bool> kp(f.target.npoints(), false), kl(f.target.nlines(), false);
  for (Index p : f.point_map) kp[p] = true;
  for (Index l : f.line_map) kl[l] = true;
  ImageReport r;
  r.image = restrict_to(f.target, kp, kl);
  r.cls = classify(r.image.structure);
  const auto& lines = r.image.line_to_parent;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto common = f.target.common_points(lines[i], lines[j]);
      const bool met = std::any_of(common.begin(), common.end(), [&](Index p) { return kp[p]; });
      if (!met) r.missing_intersections.emplace_back(lines[i], lines[j]);
    }
  return r;
}

}  // namespace synline
