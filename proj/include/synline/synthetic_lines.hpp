#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synline/collineations.hpp"
#include "synline/error.hpp"
#include "synline/incidence.hpp"
#include "synline/perm_group.hpp"

namespace synline {

/// Affine plane (plane minus deleted_line) with base point. The plane is
/// kept as its projective completion; affine automorphisms are the
/// collineations of the completion fixing deleted_line.
struct AffineTypeLine {
  IncidenceStructure plane;
  Index deleted_line = 0;
  Index base_point = 0;
  std::vector<Index> pencil;  // lines of the completion through base_point
};

struct ProjectiveTypeLine {
  IncidenceStructure plane;
  Index base_point = 0;
  std::vector<Index> pencil;
};

inline ProjectiveTypeLine make_projective_line(IncidenceStructure plane, Index mu) {
  if (mu >= plane.npoints()) throw Error(ErrorCode::BadIndex, "base point " + std::to_string(mu));
  auto lines = plane.lines_of_point(mu);
  std::vector<Index> pencil(lines.begin(), lines.end());
  return {std::move(plane), mu, std::move(pencil)};
}

/// (plane minus U, omega); omega must be off U.
inline AffineTypeLine make_affine_line(IncidenceStructure plane, Index u, Index omega) {
  if (u >= plane.nlines()) throw Error(ErrorCode::BadIndex, "line " + std::to_string(u));
  if (omega >= plane.npoints()) throw Error(ErrorCode::BadIndex, "base point " + std::to_string(omega));
  if (plane.incident(omega, u)) {
    throw Error(ErrorCode::PreconditionFailed, "base point lies on the deleted line");
  }
  auto lines = plane.lines_of_point(omega);
  std::vector<Index> pencil(lines.begin(), lines.end());
  return {std::move(plane), u, omega, std::move(pencil)};
}

/// Affine-type line of an affine plane, via its projective completion.
/// Affine point indices are kept by the completion.
inline AffineTypeLine make_affine_line(const IncidenceStructure& affine, Index omega) {
  auto [plane, u] = complete_affine(affine);
  return make_affine_line(std::move(plane), u, omega);
}

/// Action of a collineation (combined domain) on an ordered pencil, as a
/// permutation of pencil positions.
inline Permutation induced_on_pencil(const Permutation& combined, std::size_t npoints,
                                     const std::vector<Index>& pencil) {
  std::vector<Index> images(pencil.size());
  for (Index i = 0; i < pencil.size(); ++i) {
    const Index image = combined[static_cast<Index>(npoints + pencil[i])] - static_cast<Index>(npoints);
    auto it = std::lower_bound(pencil.begin(), pencil.end(), image);
    if (it == pencil.end() || *it != image) {
      throw Error(ErrorCode::PreconditionFailed, "collineation does not stabilize the pencil");
    }
    images[i] = static_cast<Index>(it - pencil.begin());
  }
  return Permutation(std::move(images));
}

/// Stabilizer upstairs, its kernel on the pencil, and the induced group
/// (the quotient source / kernel).
struct PencilAction {
  CollineationGroup source;
  PermGroup kernel;
  PermGroup induced;
  std::uint64_t source_order = 0;
  std::uint64_t kernel_order = 0;
  std::uint64_t induced_order = 0;
};

namespace detail {

inline PencilAction pencil_action(const IncidenceStructure& plane, const CollineationGroup& group,
                                  std::vector<Index> fixed_vertices,
                                  const std::vector<Index>& pencil) {
  PencilAction a;
  a.source = group.with(pointwise_stabilizer(group.combined(), fixed_vertices));
  for (Index l : pencil) fixed_vertices.push_back(group.line_vertex(l));
  a.kernel = pointwise_stabilizer(a.source.combined(), fixed_vertices);
  std::vector<Permutation> gens;
  for (const auto& g : a.source.combined().generators())
    gens.push_back(induced_on_pencil(g, plane.npoints(), pencil));
  a.induced = PermGroup(pencil.size(), std::move(gens));
  a.source_order = a.source.order();
  a.kernel_order = a.kernel.order();
  a.induced_order = a.induced.order();
  return a;
}

}  // namespace detail

inline PencilAction pencil_group(const ProjectiveTypeLine& line, const CollineationGroup& group) {
  return detail::pencil_action(line.plane, group, {group.point_vertex(line.base_point)}, line.pencil);
}

inline PencilAction pencil_group(const ProjectiveTypeLine& line, const Limits& limits = {}) {
  return pencil_group(line, automorphism_group(line.plane, limits));
}

inline PencilAction pencil_group(const AffineTypeLine& line, const CollineationGroup& group) {
  return detail::pencil_action(
      line.plane, group,
      {group.point_vertex(line.base_point), group.line_vertex(line.deleted_line)}, line.pencil);
}

inline PencilAction pencil_group(const AffineTypeLine& line, const Limits& limits = {}) {
  return pencil_group(line, automorphism_group(line.plane, limits));
}

struct LineIsomorphism {
  bool isomorphic = false;
  std::optional<Collineation> witness;
};

inline LineIsomorphism lines_isomorphic(const AffineTypeLine& a, const AffineTypeLine& b,
                                        const Limits& limits = {}) {
  const std::pair<Index, Index> pts[] = {{a.base_point, b.base_point}};
  const std::pair<Index, Index> lns[] = {{a.deleted_line, b.deleted_line}};
  auto w = find_isomorphism(a.plane, b.plane, pts, lns, limits);
  return {w.has_value(), std::move(w)};
}

inline LineIsomorphism lines_isomorphic(const ProjectiveTypeLine& a, const ProjectiveTypeLine& b,
                                        const Limits& limits = {}) {
  const std::pair<Index, Index> pts[] = {{a.base_point, b.base_point}};
  auto w = find_isomorphism(a.plane, b.plane, pts, {}, limits);
  return {w.has_value(), std::move(w)};
}

namespace detail {

inline std::vector<Permutation> bounded_elements(const PermGroup& g, const Limits& limits) {
  if (g.order() > limits.max_enumeration) {
    throw Error(ErrorCode::SizeOutOfRange, "induced group of order " + std::to_string(g.order()) +
                                               " exceeds enumeration bound");
  }
  return g.elements(limits.max_enumeration);
}

}  // namespace detail

struct InheritanceReport {
  Index base_point = 0;
  std::uint64_t induced_order = 0;         // |Aut(P)_mu / N|
  std::uint64_t inherited_count = 0;       // size of the union over U not on mu
  std::size_t lines_considered = 0;        // lines U not on mu
  bool holds = false;
  std::vector<Permutation> uninherited;    // pencil permutations, sorted
};

/// Compares the induced pencil group of (P, mu) with the union of the groups
/// induced by Aut(P)_{U,mu} over all lines U off mu.
inline InheritanceReport inheritance_check(const IncidenceStructure& plane, Index mu,
                                           const CollineationGroup& group,
                                           const Limits& limits = {}) {
  const auto line = make_projective_line(plane, mu);
  const auto action = pencil_group(line, group);
  InheritanceReport r;
  r.base_point = mu;
  const auto all = detail::bounded_elements(action.induced, limits);
  r.induced_order = all.size();
  std::set<Permutation> inherited;
  for (Index u = 0; u < plane.nlines(); ++u) {
    if (plane.incident(mu, u)) continue;
    ++r.lines_considered;
    const Index fixed[] = {group.point_vertex(mu), group.line_vertex(u)};
    auto stab = pointwise_stabilizer(action.source.combined(), fixed);
    std::vector<Permutation> gens;
    for (const auto& g : stab.generators()) gens.push_back(induced_on_pencil(g, plane.npoints(), line.pencil));
    for (auto& e : detail::bounded_elements(PermGroup(line.pencil.size(), std::move(gens)), limits))
      inherited.insert(std::move(e));
  }
  r.inherited_count = inherited.size();
  for (const auto& e : all)
    if (!inherited.count(e)) r.uninherited.push_back(e);
  r.holds = r.uninherited.empty();
  return r;
}

inline InheritanceReport inheritance_check(const IncidenceStructure& plane, Index mu,
                                           const Limits& limits = {}) {
  return inheritance_check(plane, mu, automorphism_group(plane, limits), limits);
}

struct GenerationQuestionReport {
  Index base_point = 0;
  std::uint64_t induced_order = 0;
  std::uint64_t generated_order = 0;  // order of <Aut(P)_{U,mu}/M_U : U not on mu>
  bool holds = false;
};

inline GenerationQuestionReport generation_check(const IncidenceStructure& plane, Index mu,
                                                 const CollineationGroup& group,
                                                 const Limits& limits = {}) {
  const auto line = make_projective_line(plane, mu);
  const auto action = pencil_group(line, group);
  GenerationQuestionReport r;
  r.base_point = mu;
  r.induced_order = action.induced_order;
  if (r.induced_order > limits.max_enumeration) {
    throw Error(ErrorCode::SizeOutOfRange, "induced group exceeds enumeration bound");
  }
  std::vector<Permutation> gens;
  for (Index u = 0; u < plane.nlines(); ++u) {
    if (plane.incident(mu, u)) continue;
    const Index fixed[] = {group.point_vertex(mu), group.line_vertex(u)};
    const auto stab = pointwise_stabilizer(action.source.combined(), fixed);
    for (const auto& g : stab.generators())
      gens.push_back(induced_on_pencil(g, plane.npoints(), line.pencil));
  }
  r.generated_order = PermGroup(line.pencil.size(), std::move(gens)).order();
  r.holds = r.generated_order == r.induced_order;
  return r;
}

inline GenerationQuestionReport generation_check(const IncidenceStructure& plane, Index mu,
                                                 const Limits& limits = {}) {
  return generation_check(plane, mu, automorphism_group(plane, limits), limits);
}

/// lambda(p, q) for every ordered pair of domain points (p == q allowed),
/// each an explicit sorted list of permutations of the domain.
struct BuekenhoutFamily {
  std::size_t size = 0;
  std::vector<std::vector<Permutation>> lambda;  // index p * size + q

  std::vector<Permutation>& at(Index p, Index q) { return lambda[p * size + q]; }
  const std::vector<Permutation>& at(Index p, Index q) const { return lambda[p * size + q]; }

  static BuekenhoutFamily trivial(std::size_t n) {
    BuekenhoutFamily f;
    f.size = n;
    f.lambda.assign(n * n, {Permutation(n)});
    return f;
  }
};

struct AxiomWitness {
  Index p = 0;
  Index q = 0;
  std::string detail;
};

struct BuekenhoutReport {
  bool axiom_a = true;
  bool axiom_b = true;
  bool axiom_c = true;
  bool axiom_d = true;
  bool desarguesian = true;        // every lambda(p,q), p != q, transitive off {p,q}
  bool sharply_desarguesian = true;  // ... and regular there
  bool strict_commutation = true;    // axiom (b) read elementwise
  std::vector<AxiomWitness> failures;

  bool all_axioms() const { return axiom_a && axiom_b && axiom_c && axiom_d; }
};

/// Checks axioms (a)-(d) exhaustively. Axiom (b) is elementwise commutation
/// when `strict`, otherwise equality of the product sets
/// lambda(p,q) lambda(q,p) = lambda(q,p) lambda(p,q). Throws NotAGroup when
/// some lambda(p,q) is not closed under products and inverses.
inline BuekenhoutReport buekenhout_axioms(const BuekenhoutFamily& f, bool strict = true) {
  const std::size_t n = f.size;
  if (n < 3) throw Error(ErrorCode::PreconditionFailed, "domain must have at least 3 points");
  BuekenhoutReport r;
  r.strict_commutation = strict;
  auto fail = [&](bool& flag, Index p, Index q, std::string what) {
    flag = false;
    if (r.failures.size() < 64) r.failures.push_back({p, q, std::move(what)});
  };
  std::vector<std::set<Permutation>> sets(n * n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      const auto& lam = f.at(p, q);
      auto& s = sets[p * n + q];
      s.insert(lam.begin(), lam.end());
      for (const auto& g : lam) {
        if (g.degree() != n) throw Error(ErrorCode::NotAGroup, "permutation of wrong degree");
      }
      if (!s.count(Permutation(n))) {
        throw Error(ErrorCode::NotAGroup, "lambda(" + std::to_string(p) + "," + std::to_string(q) + ") lacks the identity");
      }
      for (const auto& g : s) {
        if (!s.count(g.inverse())) {
          throw Error(ErrorCode::NotAGroup, "lambda(" + std::to_string(p) + "," + std::to_string(q) + ") not closed under inverses");
        }
        for (const auto& h : s) {
          if (!s.count(g * h)) {
            throw Error(ErrorCode::NotAGroup, "lambda(" + std::to_string(p) + "," + std::to_string(q) + ") not closed under products");
          }
        }
      }
    }
  }
  // (a) fixes p and q; a non-identity element fixes nothing else.
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      for (const auto& g : sets[p * n + q]) {
        if (!g.fixes(p) || !g.fixes(q)) {
          fail(r.axiom_a, p, q, "element moves its center or axis");
        } else if (!g.is_identity() && g.fixed_points().size() > (p == q ? 1u : 2u)) {
          fail(r.axiom_a, p, q, "non-identity element fixes a third point");
        }
      }
    }
  }
  // (b)
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      if (p == q) continue;
      const auto& a = sets[p * n + q];
      const auto& b = sets[q * n + p];
      if (strict) {
        for (const auto& g : a)
          for (const auto& h : b)
            if (g * h != h * g) fail(r.axiom_b, p, q, "elements do not commute");
      } else {
        std::set<Permutation> ab, ba;
        for (const auto& g : a)
          for (const auto& h : b) {
            ab.insert(g * h);
            ba.insert(h * g);
          }
        if (ab != ba) fail(r.axiom_b, p, q, "product sets differ");
      }
    }
  }
  // (c) gamma lambda(p,q) gamma^-1 = lambda(gamma(p), gamma(q)).
  std::set<Permutation> all;
  for (const auto& s : sets) all.insert(s.begin(), s.end());
  for (const auto& gamma : all) {
    for (Index p = 0; p < n; ++p) {
      for (Index q = 0; q < n; ++q) {
        std::set<Permutation> conj;
        for (const auto& h : sets[p * n + q]) conj.insert(h.conjugate_by(gamma));
        if (conj != sets[gamma[p] * n + gamma[q]]) fail(r.axiom_c, p, q, "conjugation not compatible");
      }
    }
  }
  // (d) unions over a fixed center / fixed axis are closed.
  for (Index x = 0; x < n; ++x) {
    std::set<Permutation> center, axis;
    for (Index y = 0; y < n; ++y) {
      center.insert(sets[x * n + y].begin(), sets[x * n + y].end());
      axis.insert(sets[y * n + x].begin(), sets[y * n + x].end());
    }
    for (const auto& g : center)
      for (const auto& h : center)
        if (!center.count(g * h)) fail(r.axiom_d, x, x, "center union not closed");
    for (const auto& g : axis)
      for (const auto& h : axis)
        if (!axis.count(g * h)) fail(r.axiom_d, x, x, "axis union not closed");
  }
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      if (p == q) continue;
      const auto& s = sets[p * n + q];
      std::vector<Permutation> gens(s.begin(), s.end());
      const Index r0 = [&] {
        Index x = 0;
        while (x == p || x == q) ++x;
        return x;
      }();
      const auto orb = orbit_of(r0, gens, n);
      const bool transitive = orb.size() == n - 2;
      r.desarguesian = r.desarguesian && transitive;
      r.sharply_desarguesian = r.sharply_desarguesian && transitive && s.size() == n - 2;
    }
  }
  return r;
}

/// lambda(u, v) on the points of U: permutations of U induced by central
/// collineations with center u and axis V through v. V ranges over all lines
/// through v; `include_u` controls whether V = U itself is used.
inline BuekenhoutFamily buekenhout_from_plane(const IncidenceStructure& plane, Index u_line,
                                              const CollineationGroup& group,
                                              bool include_u = true, const Limits& limits = {}) {
  if (u_line >= plane.nlines()) throw Error(ErrorCode::BadIndex, "line " + std::to_string(u_line));
  const auto pts = plane.points_of_line(u_line);
  const std::vector<Index> domain(pts.begin(), pts.end());
  const std::size_t n = domain.size();
  auto position = [&](Index p) {
    return static_cast<Index>(std::lower_bound(domain.begin(), domain.end(), p) - domain.begin());
  };
  BuekenhoutFamily f;
  f.size = n;
  f.lambda.assign(n * n, {});
  for (Index i = 0; i < n; ++i) {
    const Index center = domain[i];
    for (Index j = 0; j < n; ++j) {
      std::set<Permutation> induced{Permutation(n)};
      for (Index axis : plane.lines_of_point(domain[j])) {
        if (axis == u_line && !include_u) continue;
        std::vector<Index> fixed;
        for (Index p : plane.points_of_line(axis)) fixed.push_back(group.point_vertex(p));
        for (Index l : plane.lines_of_point(center)) fixed.push_back(group.line_vertex(l));
        const auto persp = pointwise_stabilizer(group.combined(), fixed);
        for (const auto& e : detail::bounded_elements(persp, limits)) {
          std::vector<Index> images(n);
          for (Index k = 0; k < n; ++k) images[k] = position(e[domain[k]]);
          induced.insert(Permutation(std::move(images)));
        }
      }
      f.at(i, j).assign(induced.begin(), induced.end());
    }
  }
  return f;
}

inline BuekenhoutFamily buekenhout_from_plane(const IncidenceStructure& plane, Index u_line,
                                              bool include_u = true, const Limits& limits = {}) {
  return buekenhout_from_plane(plane, u_line, automorphism_group(plane, limits), include_u, limits);
}

}  // namespace synline
