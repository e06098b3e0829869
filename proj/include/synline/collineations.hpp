#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "synline/error.hpp"
#include "synline/graph_search.hpp"
#include "synline/incidence.hpp"
#include "synline/perm.hpp"
#include "synline/perm_group.hpp"

namespace synline {

/// Incidence-preserving pair of point and line permutations.
struct Collineation {
  Permutation points;
  Permutation lines;

  friend bool operator==(const Collineation&, const Collineation&) = default;
};

inline Collineation identity_collineation(const IncidenceStructure& s) {
  return {Permutation(s.npoints()), Permutation(s.nlines())};
}

/// True iff p I L <=> p^g I L^g for all flags and anti-flags. Maps between
/// two structures of equal shape are accepted (source, target).
inline bool preserves_incidence(const IncidenceStructure& source, const IncidenceStructure& target,
                                const Collineation& g) {
  if (g.points.degree() != source.npoints() || g.lines.degree() != source.nlines()) return false;
  if (source.npoints() != target.npoints() || source.nlines() != target.nlines()) return false;
  if (source.nflags() != target.nflags()) return false;
  for (Index l = 0; l < source.nlines(); ++l)
    for (Index p : source.points_of_line(l))
      if (!target.incident(g.points[p], g.lines[l])) return false;
  return true;
}

inline bool is_collineation(const IncidenceStructure& s, const Collineation& g) {
  return preserves_incidence(s, s, g);
}

inline void require_collineation(const IncidenceStructure& s, const Collineation& g) {
  if (!is_collineation(s, g)) {
    throw Error(ErrorCode::InvalidCollineation, "map does not preserve incidence");
  }
}

/// Line permutation induced by a point permutation (lines matched by point
/// sets). Throws InvalidCollineation when some line image is not a line or
/// two lines share a point set.
inline Collineation collineation_from_points(const IncidenceStructure& s, Permutation points) {
  std::map<std::vector<Index>, Index> by_points;
  for (Index l = 0; l < s.nlines(); ++l) {
    auto pts = s.all_lines()[l];
    if (!by_points.emplace(std::move(pts), l).second) {
      throw Error(ErrorCode::InvalidCollineation, "line permutation not determined by points");
    }
  }
  std::vector<Index> images(s.nlines());
  for (Index l = 0; l < s.nlines(); ++l) {
    std::vector<Index> img;
    for (Index p : s.points_of_line(l)) img.push_back(points[p]);
    std::sort(img.begin(), img.end());
    auto it = by_points.find(img);
    if (it == by_points.end()) {
      throw Error(ErrorCode::InvalidCollineation, "image of line " + std::to_string(l) + " is not a line");
    }
    images[l] = it->second;
  }
  Collineation g{std::move(points), Permutation(std::move(images))};
  require_collineation(s, g);
  return g;
}

/// Single permutation on points 0..np-1 followed by lines np..np+nl-1.
inline Permutation combine(const Collineation& g) {
  const std::size_t np = g.points.degree();
  std::vector<Index> images(np + g.lines.degree());
  for (Index p = 0; p < np; ++p) images[p] = g.points[p];
  for (Index l = 0; l < g.lines.degree(); ++l) images[np + l] = static_cast<Index>(np + g.lines[l]);
  return Permutation(std::move(images));
}

inline Collineation split(const Permutation& combined, std::size_t npoints) {
  std::vector<Index> pts(npoints), lns(combined.degree() - npoints);
  for (Index p = 0; p < npoints; ++p) pts[p] = combined[p];
  for (Index l = 0; l < lns.size(); ++l) lns[l] = static_cast<Index>(combined[npoints + l] - npoints);
  return {Permutation(std::move(pts)), Permutation(std::move(lns))};
}

/// Collineation group acting on the combined domain (points, then lines).
/// Line stabilizers, pencil kernels and elementwise stabilizers are then
/// ordinary point stabilizers.
class CollineationGroup {
 public:
  CollineationGroup() = default;
  CollineationGroup(std::size_t npoints, std::size_t nlines, PermGroup combined)
      : npoints_(npoints), nlines_(nlines), group_(std::move(combined)) {}

  std::size_t npoints() const { return npoints_; }
  std::size_t nlines() const { return nlines_; }
  const PermGroup& combined() const { return group_; }
  std::uint64_t order() const { return group_.order(); }

  Index point_vertex(Index p) const { return p; }
  Index line_vertex(Index l) const { return static_cast<Index>(npoints_ + l); }

  Collineation collineation(const Permutation& combined) const { return split(combined, npoints_); }

  std::vector<Collineation> generators() const {
    std::vector<Collineation> out;
    for (const auto& g : group_.generators()) out.push_back(collineation(g));
    return out;
  }

  /// Same group with the given subgroup generators (combined domain).
  CollineationGroup with(PermGroup subgroup) const {
    return CollineationGroup(npoints_, nlines_, std::move(subgroup));
  }

  PermGroup point_action() const { return restricted(0, npoints_); }
  PermGroup line_action() const { return restricted(npoints_, nlines_); }

 private:
  PermGroup restricted(std::size_t offset, std::size_t size) const {
    std::vector<Permutation> gens;
    for (const auto& g : group_.generators()) {
      std::vector<Index> images(size);
      for (Index i = 0; i < size; ++i) images[i] = static_cast<Index>(g[offset + i] - offset);
      gens.emplace_back(std::move(images));
    }
    return PermGroup(size, std::move(gens));
  }

  std::size_t npoints_ = 0;
  std::size_t nlines_ = 0;
  PermGroup group_;
};

/// Full automorphism group via refinement search on the incidence graph.
inline CollineationGroup automorphism_group(const IncidenceStructure& s, const Limits& limits = {}) {
  check_size(s.nelements(), limits, "automorphism search");
  auto search = automorphisms(incidence_graph(s));
  return CollineationGroup(s.npoints(), s.nlines(),
                           PermGroup(s.nelements(), std::move(search.generators)));
}

/// Setwise stabilizer of a set of points and a set of lines in the full
/// automorphism group, searched directly on the colored incidence graph.
inline CollineationGroup set_stabilizer_group(const IncidenceStructure& s, std::span<const Index> points,
                                              std::span<const Index> lines, const Limits& limits = {}) {
  check_size(s.nelements(), limits, "automorphism search");
  std::vector<Index> marks(s.nelements(), 0);
  for (Index p : points) marks.at(p) = 1;
  for (Index l : lines) marks.at(s.npoints() + l) = 1;
  auto search = automorphisms(incidence_graph(s, marks));
  return CollineationGroup(s.npoints(), s.nlines(),
                           PermGroup(s.nelements(), std::move(search.generators)));
}

/// Isomorphism a -> b sending each forced point pair and line pair, or
/// nullopt.
inline std::optional<Collineation> find_isomorphism(
    const IncidenceStructure& a, const IncidenceStructure& b,
    std::span<const std::pair<Index, Index>> point_pairs = {},
    std::span<const std::pair<Index, Index>> line_pairs = {}, const Limits& limits = {}) {
  if (a.npoints() != b.npoints() || a.nlines() != b.nlines()) return std::nullopt;
  check_size(a.nelements(), limits, "isomorphism search");
  std::vector<std::pair<Index, Index>> forced(point_pairs.begin(), point_pairs.end());
  const Index np = static_cast<Index>(a.npoints());
  for (auto [x, y] : line_pairs) forced.emplace_back(np + x, np + y);
  auto map = find_isomorphism(incidence_graph(a), incidence_graph(b), forced);
  if (!map) return std::nullopt;
  return split(*map, a.npoints());
}

struct FixedReport {
  std::vector<Index> points;
  std::vector<Index> lines;
};

inline FixedReport fixed_counts(const IncidenceStructure& s, const Collineation& g) {
  require_collineation(s, g);
  return {g.points.fixed_points(), g.lines.fixed_points()};
}

/// Checks P A = A L with explicit 0/1 matrices: P the point permutation
/// matrix (P_ij = 1 iff p_i^g = p_j), L the line permutation matrix, A the
/// incidence matrix.
inline bool incidence_conjugation_check(const IncidenceStructure& s, const Collineation& g) {
  const std::size_t np = s.npoints(), nl = s.nlines();
  if (g.points.degree() != np || g.lines.degree() != nl) return false;
  const auto a = incidence_matrix(s);
  std::vector<int> pm(np * np, 0), lm(nl * nl, 0);
  for (std::size_t i = 0; i < np; ++i) pm[i * np + g.points[i]] = 1;
  for (std::size_t i = 0; i < nl; ++i) lm[i * nl + g.lines[i]] = 1;
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t k = 0; k < nl; ++k) {
      int pa = 0, al = 0;
      for (std::size_t j = 0; j < np; ++j) pa += pm[i * np + j] * a(j, k);
      for (std::size_t j = 0; j < nl; ++j) al += a(i, j) * lm[j * nl + k];
      if (pa != al) return false;
    }
  }
  return true;
}

enum class PerspectivityKind { Identity, Elation, Homology, None };

inline std::string_view to_string(PerspectivityKind k) {
  switch (k) {
    case PerspectivityKind::Identity: return "identity";
    case PerspectivityKind::Elation: return "elation";
    case PerspectivityKind::Homology: return "homology";
    case PerspectivityKind::None: return "none";
  }
  return "?";
}

struct PerspectivityClass {
  PerspectivityKind kind = PerspectivityKind::None;
  std::optional<Index> center;
  std::optional<Index> axis;
};

/// Lines fixed pointwise by g.
inline std::vector<Index> axes_of(const IncidenceStructure& s, const Collineation& g) {
  std::vector<Index> out;
  for (Index l = 0; l < s.nlines(); ++l) {
    auto pts = s.points_of_line(l);
    if (std::all_of(pts.begin(), pts.end(), [&](Index p) { return g.points.fixes(p); }))
      out.push_back(l);
  }
  return out;
}

/// Points fixed linewise by g.
inline std::vector<Index> centers_of(const IncidenceStructure& s, const Collineation& g) {
  std::vector<Index> out;
  for (Index p = 0; p < s.npoints(); ++p) {
    auto lns = s.lines_of_point(p);
    if (std::all_of(lns.begin(), lns.end(), [&](Index l) { return g.lines.fixes(l); }))
      out.push_back(p);
  }
  return out;
}

inline PerspectivityClass classify_perspectivity(const IncidenceStructure& s, const Collineation& g) {
  if (g.points.is_identity() && g.lines.is_identity()) return {PerspectivityKind::Identity, {}, {}};
  const auto axes = axes_of(s, g);
  const auto centers = centers_of(s, g);
  if (axes.size() != 1 || centers.size() != 1) return {};
  const Index c = centers.front(), a = axes.front();
  return {s.incident(c, a) ? PerspectivityKind::Elation : PerspectivityKind::Homology, c, a};
}

struct AntiFlag {
  Index point = 0;
  Index line = 0;
  friend auto operator<=>(const AntiFlag&, const AntiFlag&) = default;
};

struct AntiFlagOrbits {
  std::vector<AntiFlag> representatives;  // least anti-flag of each orbit
  std::vector<std::size_t> sizes;
  std::size_t count() const { return representatives.size(); }
};

inline AntiFlagOrbits anti_flag_orbits(const IncidenceStructure& s, const CollineationGroup& g) {
  const std::size_t np = s.npoints(), nl = s.nlines();
  const auto gens = g.generators();
  std::vector<bool> seen(np * nl, false);
  AntiFlagOrbits out;
  for (Index p = 0; p < np; ++p) {
    for (Index l = 0; l < nl; ++l) {
      if (s.incident(p, l) || seen[p * nl + l]) continue;
      std::vector<AntiFlag> queue{{p, l}};
      seen[p * nl + l] = true;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const auto& c : gens) {
          const AntiFlag next{c.points[queue[i].point], c.lines[queue[i].line]};
          if (!seen[next.point * nl + next.line]) {
            seen[next.point * nl + next.line] = true;
            queue.push_back(next);
          }
        }
      }
      out.representatives.push_back({p, l});
      out.sizes.push_back(queue.size());
    }
  }
  return out;
}

inline AntiFlagOrbits anti_flag_orbits(const IncidenceStructure& s, const Limits& limits = {}) {
  return anti_flag_orbits(s, automorphism_group(s, limits));
}

/// Elements of the translation group with center x: identity and every
/// elation of G with center x.
inline std::vector<Collineation> elations_with_center(const IncidenceStructure& s,
                                                      const CollineationGroup& g, Index x,
                                                      const Limits& limits = {}) {
  std::vector<Index> pencil;
  for (Index l : s.lines_of_point(x)) pencil.push_back(g.line_vertex(l));
  std::vector<Collineation> out;
  for (const auto& e : pointwise_stabilizer(g.combined(), pencil).elements(limits.max_enumeration)) {
    auto c = g.collineation(e);
    auto k = classify_perspectivity(s, c);
    if (k.kind == PerspectivityKind::Identity ||
        (k.kind == PerspectivityKind::Elation && k.center == x))
      out.push_back(std::move(c));
  }
  return out;
}

/// Identity and every elation of G with axis Y.
inline std::vector<Collineation> elations_with_axis(const IncidenceStructure& s,
                                                    const CollineationGroup& g, Index y,
                                                    const Limits& limits = {}) {
  auto pts = s.points_of_line(y);
  std::vector<Index> fixed(pts.begin(), pts.end());
  std::vector<Collineation> out;
  for (const auto& e : pointwise_stabilizer(g.combined(), fixed).elements(limits.max_enumeration)) {
    auto c = g.collineation(e);
    auto k = classify_perspectivity(s, c);
    if (k.kind == PerspectivityKind::Identity ||
        (k.kind == PerspectivityKind::Elation && k.axis == y))
      out.push_back(std::move(c));
  }
  return out;
}

/// Element of G mapping vertex a to vertex b (combined domain), if any.
inline std::optional<Permutation> element_mapping(const PermGroup& g, Index a, Index b) {
  const Index base[] = {a};
  const auto chain = g.chain_with_base(base);
  if (chain.levels.empty()) {
    if (a == b) return Permutation(g.degree());
    return std::nullopt;
  }
  const auto& top = chain.levels.front();
  if (!top.in_orbit(b)) return std::nullopt;
  return top.rep(b);
}

struct FlagOnlyResult {
  Index x = 0;
  Index y = 0;
  Index center_u = 0;         // center of t, least point of Y other than x
  Index axis_v = 0;           // axis of t~, least line through x other than Y
  Index reference_t = 0;      // least point off Y, moved by t
  Index reference_tt = 0;     // least point off V, moved by t~
  Collineation t;
  Collineation t_tilde;
  Collineation product;       // t then t~
  FixedReport fixed;
  bool flag_only = false;     // fixed structure is exactly (x, Y)
};

/// Product of an elation t with axis Y (center u != x on Y) and an elation
/// t~ with center x (axis V != Y through x). Each elation is the group
/// element mapping the least point off its axis to the least other point of
/// its orbit under the full elation group. nullopt when one of the elation
/// groups is trivial.
inline std::optional<FlagOnlyResult> flag_only_automorphism(const IncidenceStructure& s, Index x,
                                                            Index y, const CollineationGroup& g) {
  if (x >= s.npoints() || y >= s.nlines() || !s.incident(x, y)) {
    throw Error(ErrorCode::BadFlag, "(" + std::to_string(x) + ", " + std::to_string(y) + ") is not a flag");
  }
  FlagOnlyResult r;
  r.x = x;
  r.y = y;
  auto on_y = s.points_of_line(y);
  r.center_u = *std::find_if(on_y.begin(), on_y.end(), [&](Index p) { return p != x; });
  auto through_x = s.lines_of_point(x);
  r.axis_v = *std::find_if(through_x.begin(), through_x.end(), [&](Index l) { return l != y; });

  auto elation = [&](Index center, Index axis, Index& reference) -> std::optional<Collineation> {
    std::vector<Index> fixed;
    for (Index p : s.points_of_line(axis)) fixed.push_back(g.point_vertex(p));
    for (Index l : s.lines_of_point(center)) fixed.push_back(g.line_vertex(l));
    auto group = pointwise_stabilizer(g.combined(), fixed);
    reference = 0;
    while (s.incident(reference, axis)) ++reference;
    auto orb = group.orbit(reference);
    std::sort(orb.begin(), orb.end());
    auto it = std::find_if(orb.begin(), orb.end(), [&](Index v) { return v != reference; });
    if (it == orb.end()) return std::nullopt;
    return g.collineation(*element_mapping(group, reference, *it));
  };

  auto t = elation(r.center_u, y, r.reference_t);
  auto tt = elation(x, r.axis_v, r.reference_tt);
  if (!t || !tt) return std::nullopt;
  r.t = *t;
  r.t_tilde = *tt;
  r.product = {r.t.points * r.t_tilde.points, r.t.lines * r.t_tilde.lines};
  r.fixed = fixed_counts(s, r.product);
  r.flag_only = r.fixed.points == std::vector<Index>{x} && r.fixed.lines == std::vector<Index>{y};
  return r;
}

inline std::optional<FlagOnlyResult> flag_only_automorphism(const IncidenceStructure& s, Index x,
                                                            Index y, const Limits& limits = {}) {
  if (x >= s.npoints() || y >= s.nlines() || !s.incident(x, y)) {
    throw Error(ErrorCode::BadFlag, "(" + std::to_string(x) + ", " + std::to_string(y) + ") is not a flag");
  }
  return flag_only_automorphism(s, x, y, automorphism_group(s, limits));
}

/// Fixed structure consists of m > 0 lines through a common point U and
/// n > 0 points all on one of those lines, nothing else.
inline bool is_of_projective_origin(const IncidenceStructure& s, const Collineation& g) {
  const auto f = fixed_counts(s, g);
  if (f.points.empty() || f.lines.empty()) return false;
  bool common_point = false;
  for (Index u = 0; u < s.npoints() && !common_point; ++u) {
    common_point = std::all_of(f.lines.begin(), f.lines.end(), [&](Index l) { return s.incident(u, l); });
  }
  if (!common_point) return false;
  return std::any_of(f.lines.begin(), f.lines.end(), [&](Index l) {
    return std::all_of(f.points.begin(), f.points.end(), [&](Index p) { return s.incident(p, l); });
  });
}

struct FlagOnlyElement {
  Collineation element;
  Index x = 0;
  Index y = 0;
};

/// Elements of G whose fixed structure is exactly one flag.
inline std::vector<FlagOnlyElement> flag_only_elements(const IncidenceStructure& s,
                                                       const CollineationGroup& g,
                                                       const Limits& limits = {}) {
  std::vector<FlagOnlyElement> out;
  for (const auto& e : g.combined().elements(limits.max_enumeration)) {
    auto c = g.collineation(e);
    auto fp = c.points.fixed_points();
    auto fl = c.lines.fixed_points();
    if (fp.size() == 1 && fl.size() == 1 && s.incident(fp[0], fl[0]))
      out.push_back({std::move(c), fp[0], fl[0]});
  }
  return out;
}

/// Whether g = a b with a in T(x), b in T(Y) (a applied first).
inline bool in_translation_product(const IncidenceStructure& s, const CollineationGroup& group,
                                   const Collineation& g, Index x, Index y,
                                   const Limits& limits = {}) {
  const auto tx = elations_with_center(s, group, x, limits);
  const auto ty = elations_with_axis(s, group, y, limits);
  const auto target = combine(g);
  for (const auto& a : tx)
    for (const auto& b : ty)
      if (combine(a) * combine(b) == target) return true;
  return false;
}

}  // namespace synline
