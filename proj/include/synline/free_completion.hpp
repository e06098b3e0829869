#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "synline/collineations.hpp"
#include "synline/error.hpp"
#include "synline/incidence.hpp"
#include "synline/io.hpp"

namespace synline {

using IndexPair = std::pair<Index, Index>;
inline constexpr IndexPair kNoPair{kNone, kNone};

/// One stage of a free completion. Elements of earlier stages keep their
/// indices; new ones are appended in lexicographic order of their defining
/// pairs (two lines for a point, two points for a line).
struct CompletionStage {
  IncidenceStructure structure;
  std::size_t index = 0;
  std::vector<std::size_t> point_birth;
  std::vector<std::size_t> line_birth;
  std::vector<IndexPair> point_pair;  // kNoPair for seed points
  std::vector<IndexPair> line_pair;   // kNoPair for seed lines
};

struct CompletionBudget {
  std::size_t max_stages = 1;
  /// Stops before the first stage whose result would exceed this many
  /// elements (points plus lines).
  std::optional<std::size_t> max_elements;
};

/// Stage k adds points when k is odd, lines when k is even; `lines_first`
/// swaps the parity.
inline bool stage_adds_points(std::size_t k, bool lines_first) { return (k % 2 == 1) != lines_first; }

inline bool is_partial_linear(const IncidenceStructure& s) {
  std::vector<Index> stamp(s.npoints(), kNone);
  for (Index p = 0; p < s.npoints(); ++p) {
    for (Index l : s.lines_of_point(p)) {
      for (Index r : s.points_of_line(l)) {
        if (r == p) continue;
        if (stamp[r] == p) return false;
        stamp[r] = p;
      }
    }
  }
  return true;
}

namespace detail {

inline CompletionStage seed_stage(const IncidenceStructure& seed) {
  CompletionStage s;
  s.structure = seed;
  s.point_birth.assign(seed.npoints(), 0);
  s.line_birth.assign(seed.nlines(), 0);
  s.point_pair.assign(seed.npoints(), kNoPair);
  s.line_pair.assign(seed.nlines(), kNoPair);
  return s;
}

/// Pairs of points with no common line (lines = false) or pairs of lines
/// with no common point (lines = true), in lexicographic order.
inline std::vector<IndexPair> free_pairs(const IncidenceStructure& s, bool of_lines) {
  const std::size_t n = of_lines ? s.nlines() : s.npoints();
  std::vector<IndexPair> out;
  std::vector<Index> stamp(n, kNone);
  for (Index a = 0; a < n; ++a) {
    auto through = of_lines ? s.points_of_line(a) : s.lines_of_point(a);
    for (Index m : through) {
      auto other = of_lines ? s.lines_of_point(m) : s.points_of_line(m);
      for (Index b : other) stamp[b] = a;
    }
    for (Index b = a + 1; b < n; ++b)
      if (stamp[b] != a) out.emplace_back(a, b);
  }
  return out;
}

inline CompletionStage next_stage(const CompletionStage& prev, bool add_points,
                                  const std::vector<IndexPair>& pairs) {
  CompletionStage s;
  s.index = prev.index + 1;
  s.point_birth = prev.point_birth;
  s.line_birth = prev.line_birth;
  s.point_pair = prev.point_pair;
  s.line_pair = prev.line_pair;
  std::vector<std::vector<Index>> lines = prev.structure.all_lines();
  std::size_t np = prev.structure.npoints();
  if (add_points) {
    for (auto [a, b] : pairs) {
      lines[a].push_back(static_cast<Index>(np));
      lines[b].push_back(static_cast<Index>(np));
      s.point_birth.push_back(s.index);
      s.point_pair.emplace_back(a, b);
      ++np;
    }
  } else {
    for (auto [a, b] : pairs) {
      lines.push_back({a, b});
      s.line_birth.push_back(s.index);
      s.line_pair.emplace_back(a, b);
    }
  }
  s.structure = IncidenceStructure(np, std::move(lines));
  return s;
}

}  // namespace detail

/// Free completion of a partial linear space: the seed (stage 0) followed by
/// the completed stages, each adding one point per pair of nonconcurrent
/// lines or one line per pair of noncollinear points.
inline std::vector<CompletionStage> free_complete(const IncidenceStructure& seed,
                                                  const CompletionBudget& budget,
                                                  bool lines_first = false,
                                                  const Limits& limits = {}) {
  if (budget.max_stages == 0) throw Error(ErrorCode::BudgetZero, "stage budget is zero");
  if (!is_partial_linear(seed)) {
    throw Error(ErrorCode::NotPartialLinear, "two points share more than one line");
  }
  std::vector<CompletionStage> stages{detail::seed_stage(seed)};
  const std::size_t cap = budget.max_elements.value_or(limits.max_elements);
  for (std::size_t k = 1; k <= budget.max_stages; ++k) {
    const auto& prev = stages.back();
    const bool add_points = stage_adds_points(k, lines_first);
    const auto pairs = detail::free_pairs(prev.structure, add_points);
    if (prev.structure.nelements() + pairs.size() > cap) break;
    stages.push_back(detail::next_stage(prev, add_points, pairs));
  }
  return stages;
}

inline std::vector<CompletionStage> free_complete(const IncidenceStructure& seed,
                                                  std::size_t max_stages,
                                                  bool lines_first = false,
                                                  const Limits& limits = {}) {
  return free_complete(seed, CompletionBudget{max_stages, std::nullopt}, lines_first, limits);
}

/// Re-derives each non-seed element from its defining pair and checks the
/// stage structure matches exactly.
inline bool provenance_sound(const CompletionStage& stage) {
  const auto& s = stage.structure;
  for (Index p = 0; p < s.npoints(); ++p) {
    if (stage.point_birth[p] == 0) continue;
    auto [a, b] = stage.point_pair[p];
    if (!s.incident(p, a) || !s.incident(p, b)) return false;
    if (stage.line_birth[a] >= stage.point_birth[p] || stage.line_birth[b] >= stage.point_birth[p]) return false;
    for (Index q : s.points_of_line(a)) {
      if (q != p && stage.point_birth[q] < stage.point_birth[p] && s.incident(q, b)) return false;
    }
  }
  for (Index l = 0; l < s.nlines(); ++l) {
    if (stage.line_birth[l] == 0) continue;
    auto [a, b] = stage.line_pair[l];
    if (!s.incident(a, l) || !s.incident(b, l)) return false;
    if (stage.point_birth[a] >= stage.line_birth[l] || stage.point_birth[b] >= stage.line_birth[l]) return false;
  }
  std::map<std::pair<std::size_t, IndexPair>, Index> seen_points, seen_lines;
  for (Index p = 0; p < s.npoints(); ++p)
    if (stage.point_birth[p] && !seen_points.emplace(std::pair{stage.point_birth[p], stage.point_pair[p]}, p).second)
      return false;
  for (Index l = 0; l < s.nlines(); ++l)
    if (stage.line_birth[l] && !seen_lines.emplace(std::pair{stage.line_birth[l], stage.line_pair[l]}, l).second)
      return false;
  return true;
}

/// True when `small` is the structure induced on the first points and lines
/// of `big` (the way every stage embeds its predecessors).
inline bool is_prefix_substructure(const IncidenceStructure& small, const IncidenceStructure& big) {
  if (small.npoints() > big.npoints() || small.nlines() > big.nlines()) return false;
  for (Index l = 0; l < small.nlines(); ++l) {
    std::vector<Index> kept;
    for (Index p : big.points_of_line(l))
      if (p < small.npoints()) kept.push_back(p);
    auto own = small.points_of_line(l);
    if (!std::equal(kept.begin(), kept.end(), own.begin(), own.end())) return false;
  }
  return true;
}

/// Per-stage extension of a seed automorphism: the element born from the
/// pair {X, Y} goes to the element born from {X^a, Y^a}.
struct StagedAutomorphism {
  std::vector<Collineation> stages;
};

inline StagedAutomorphism extend_automorphism(const std::vector<CompletionStage>& stages,
                                              const Collineation& alpha) {
  if (stages.empty()) return {};
  if (!is_collineation(stages.front().structure, alpha)) {
    throw Error(ErrorCode::NotAnAutomorphism, "map is not an automorphism of the seed");
  }
  StagedAutomorphism out;
  out.stages.push_back(alpha);
  for (std::size_t k = 1; k < stages.size(); ++k) {
    const auto& st = stages[k];
    const auto& prev = out.stages.back();
    std::vector<Index> pts(prev.points.images()), lns(prev.lines.images());
    auto sorted = [](Index a, Index b) { return a < b ? IndexPair{a, b} : IndexPair{b, a}; };
    std::map<IndexPair, Index> born_points, born_lines;
    for (Index p = static_cast<Index>(pts.size()); p < st.structure.npoints(); ++p) born_points[st.point_pair[p]] = p;
    for (Index l = static_cast<Index>(lns.size()); l < st.structure.nlines(); ++l) born_lines[st.line_pair[l]] = l;
    const std::size_t old_np = pts.size(), old_nl = lns.size();
    for (Index p = static_cast<Index>(old_np); p < st.structure.npoints(); ++p) {
      auto [a, b] = st.point_pair[p];
      auto it = born_points.find(sorted(prev.lines[a], prev.lines[b]));
      if (it == born_points.end()) throw Error(ErrorCode::NotAnAutomorphism, "image pair was not completed");
      pts.push_back(it->second);
    }
    for (Index l = static_cast<Index>(old_nl); l < st.structure.nlines(); ++l) {
      auto [a, b] = st.line_pair[l];
      auto it = born_lines.find(sorted(prev.points[a], prev.points[b]));
      if (it == born_lines.end()) throw Error(ErrorCode::NotAnAutomorphism, "image pair was not completed");
      lns.push_back(it->second);
    }
    Collineation next{Permutation(std::move(pts)), Permutation(std::move(lns))};
    if (!is_collineation(st.structure, next)) {
      throw Error(ErrorCode::NotAnAutomorphism, "extension fails at stage " + std::to_string(k));
    }
    out.stages.push_back(std::move(next));
  }
  return out;
}

/// Every point on at least 3 lines and every line with at least 3 points.
inline bool is_confined(const IncidenceStructure& s) {
  for (Index p = 0; p < s.npoints(); ++p)
    if (s.lines_of_point(p).size() < 3) return false;
  for (Index l = 0; l < s.nlines(); ++l)
    if (s.points_of_line(l).size() < 3) return false;
  return true;
}

/// Largest confined subconfiguration: repeatedly drops points on at most two
/// remaining lines and lines with at most two remaining points.
inline Restriction confined_core(const IncidenceStructure& s) {
  std::vector<bool> keep_p(s.npoints(), true), keep_l(s.nlines(), true);
  std::vector<std::size_t> deg_p(s.npoints()), deg_l(s.nlines());
  for (Index p = 0; p < s.npoints(); ++p) deg_p[p] = s.lines_of_point(p).size();
  for (Index l = 0; l < s.nlines(); ++l) deg_l[l] = s.points_of_line(l).size();
  std::vector<std::pair<bool, Index>> queue;  // (is_line, index)
  for (Index p = 0; p < s.npoints(); ++p)
    if (deg_p[p] < 3) queue.emplace_back(false, p);
  for (Index l = 0; l < s.nlines(); ++l)
    if (deg_l[l] < 3) queue.emplace_back(true, l);
  while (!queue.empty()) {
    auto [is_line, x] = queue.back();
    queue.pop_back();
    if (is_line) {
      if (!keep_l[x]) continue;
      keep_l[x] = false;
      for (Index p : s.points_of_line(x))
        if (keep_p[p] && --deg_p[p] < 3) queue.emplace_back(false, p);
    } else {
      if (!keep_p[x]) continue;
      keep_p[x] = false;
      for (Index l : s.lines_of_point(x))
        if (keep_l[l] && --deg_l[l] < 3) queue.emplace_back(true, l);
    }
  }
  return restrict_to(s, keep_p, keep_l);
}

/// Embedding of a pattern configuration into a host: injective on points
/// and lines, flags sent to flags.
struct SubconfigurationMatch {
  std::vector<Index> points;  // pattern point -> host point
  std::vector<Index> lines;   // pattern line -> host line
};

/// Finds up to `limit` embeddings of `pattern` into `host` (every pattern
/// line must carry at least two points). Points are assigned in index order;
/// each pattern line is sent to the join of its first two images.
inline std::vector<SubconfigurationMatch> find_subconfigurations(const IncidenceStructure& pattern,
                                                                 const IncidenceStructure& host,
                                                                 std::size_t limit = 1) {
  std::vector<SubconfigurationMatch> found;
  const std::size_t np = pattern.npoints(), nl = pattern.nlines();
  for (Index l = 0; l < nl; ++l) {
    if (pattern.points_of_line(l).size() < 2) {
      throw Error(ErrorCode::PreconditionFailed, "pattern line with fewer than two points");
    }
  }
  std::vector<Index> pmap(np, kNone), lmap(nl, kNone);
  std::vector<bool> used_p(host.npoints(), false), used_l(host.nlines(), false);
  auto search = [&](auto&& self, Index i) -> void {
    if (found.size() >= limit) return;
    if (i == np) {
      found.push_back({pmap, lmap});
      return;
    }
    for (Index h = 0; h < host.npoints(); ++h) {
      if (used_p[h]) continue;
      pmap[i] = h;
      std::vector<Index> newly;
      bool ok = true;
      for (Index l : pattern.lines_of_point(i)) {
        if (lmap[l] != kNone) {
          if (!host.incident(h, lmap[l])) ok = false;
        } else {
          Index other = kNone;
          for (Index r : pattern.points_of_line(l))
            if (r != i && pmap[r] != kNone && r < i) other = r;
          if (other == kNone) continue;
          const Index j = host.join(h, pmap[other]);
          if (j == kNone || used_l[j]) ok = false;
          else {
            lmap[l] = j;
            used_l[j] = true;
            newly.push_back(l);
          }
        }
        if (!ok) break;
      }
      if (ok) {
        used_p[h] = true;
        self(self, i + 1);
        used_p[h] = false;
      }
      for (Index l : newly) {
        used_l[lmap[l]] = false;
        lmap[l] = kNone;
      }
      pmap[i] = kNone;
      if (found.size() >= limit) return;
    }
  };
  search(search, 0);
  return found;
}

struct ConfinementProbe {
  std::size_t stage = 0;
  std::size_t core_points = 0;
  std::size_t core_lines = 0;
  bool core_inside_seed = true;             // every core element has birth 0
  std::size_t desargues_found = 0;          // embeddings found (up to the limit)
  bool desargues_outside_seed = false;      // some embedding uses a stage >= 1 element
};

/// Hartshorne containment probe on each stage: the confined core (which
/// contains every confined subconfiguration) and an explicit search for
/// Desargues configurations.
inline std::vector<ConfinementProbe> confinement_probe(const std::vector<CompletionStage>& stages,
                                                       std::size_t desargues_limit = 1000) {
  const auto pattern = desargues_configuration();
  std::vector<ConfinementProbe> out;
  for (const auto& st : stages) {
    ConfinementProbe r;
    r.stage = st.index;
    const auto core = confined_core(st.structure);
    r.core_points = core.structure.npoints();
    r.core_lines = core.structure.nlines();
    for (Index p : core.point_to_parent) r.core_inside_seed = r.core_inside_seed && st.point_birth[p] == 0;
    for (Index l : core.line_to_parent) r.core_inside_seed = r.core_inside_seed && st.line_birth[l] == 0;
    const auto matches = find_subconfigurations(pattern, st.structure, desargues_limit);
    r.desargues_found = matches.size();
    for (const auto& m : matches) {
      for (Index p : m.points) r.desargues_outside_seed |= st.point_birth[p] != 0;
      for (Index l : m.lines) r.desargues_outside_seed |= st.line_birth[l] != 0;
    }
    out.push_back(r);
  }
  return out;
}

/// Orbit sizes of the cyclic group generated by a permutation: size -> count.
inline std::map<std::size_t, std::size_t> cycle_histogram(const Permutation& g,
                                                          std::span<const Index> skip = {}) {
  std::vector<bool> seen(g.degree(), false);
  for (Index x : skip) seen[x] = true;
  std::map<std::size_t, std::size_t> out;
  for (Index x = 0; x < g.degree(); ++x) {
    if (seen[x]) continue;
    std::size_t len = 0;
    for (Index y = x; !seen[y]; y = g[y]) {
      seen[y] = true;
      ++len;
    }
    ++out[len];
  }
  return out;
}

struct PipelineStageReport {
  std::size_t stage = 0;
  std::size_t npoints = 0;
  std::size_t nlines = 0;
  std::vector<Index> fixed_points;
  std::vector<Index> fixed_lines;
  std::map<std::size_t, std::size_t> point_orbits;  // excluding the base point
  std::map<std::size_t, std::size_t> line_orbits;
};

struct PipelineReport {
  Collineation alpha;         // on the original plane
  Index x = 0;                // fixed point, original index
  Index m = 0;                // fixed line, original index
  Index seed_x = 0;           // x inside the seed
  std::uint64_t alpha_order = 0;
  std::vector<CompletionStage> stages;
  StagedAutomorphism extension;
  std::vector<PipelineStageReport> per_stage;
  /// Every stage: fixed points {x}, no fixed line.
  bool fixes_only_x = false;
  /// Every orbit other than {x} has size equal to alpha_order.
  bool uniform_orbits = false;
};

/// Least element (in sorted combined order) fixing exactly one anti-flag
/// and nothing else, optionally of a given order.
inline std::optional<Collineation> anti_flag_only_element(const IncidenceStructure& plane,
                                                          const CollineationGroup& group,
                                                          std::optional<std::uint64_t> order = {},
                                                          const Limits& limits = {}) {
  for (const auto& e : group.combined().elements(limits.max_enumeration)) {
    if (order && e.order() != *order) continue;
    auto c = group.collineation(e);
    auto fp = c.points.fixed_points();
    auto fl = c.lines.fixed_points();
    if (fp.size() == 1 && fl.size() == 1 && !plane.incident(fp[0], fl[0])) return c;
  }
  return std::nullopt;
}

/// Deletes the fixed line M of an anti-flag-only automorphism alpha (and
/// M's points), free-completes the rest and extends alpha through every
/// stage.
inline PipelineReport anti_flag_pipeline(const IncidenceStructure& plane, const Collineation& alpha,
                                         std::size_t stages, const Limits& limits = {}) {
  if (stages == 0) throw Error(ErrorCode::BudgetZero, "stage budget is zero");
  const auto f = fixed_counts(plane, alpha);
  if (f.points.size() != 1 || f.lines.size() != 1 || plane.incident(f.points[0], f.lines[0])) {
    throw Error(ErrorCode::PreconditionFailed, "automorphism does not fix exactly one anti-flag");
  }
  PipelineReport r;
  r.alpha = alpha;
  r.alpha_order = alpha.points.order();
  r.x = f.points[0];
  r.m = f.lines[0];
  auto on_m = plane.points_of_line(r.m);
  const Index del_lines[] = {r.m};
  const auto seed = remove_elements(plane, on_m, del_lines);
  r.seed_x = seed.point_from_parent[r.x];
  std::vector<Index> sp(seed.structure.npoints()), sl(seed.structure.nlines());
  for (Index p = 0; p < sp.size(); ++p) sp[p] = seed.point_from_parent[alpha.points[seed.point_to_parent[p]]];
  for (Index l = 0; l < sl.size(); ++l) sl[l] = seed.line_from_parent[alpha.lines[seed.line_to_parent[l]]];
  const Collineation alpha0{Permutation(std::move(sp)), Permutation(std::move(sl))};
  r.stages = free_complete(seed.structure, stages, false, limits);
  r.extension = extend_automorphism(r.stages, alpha0);
  r.fixes_only_x = true;
  r.uniform_orbits = true;
  for (std::size_t k = 0; k < r.stages.size(); ++k) {
    const auto& g = r.extension.stages[k];
    PipelineStageReport s;
    s.stage = k;
    s.npoints = r.stages[k].structure.npoints();
    s.nlines = r.stages[k].structure.nlines();
    s.fixed_points = g.points.fixed_points();
    s.fixed_lines = g.lines.fixed_points();
    const Index skip[] = {r.seed_x};
    s.point_orbits = cycle_histogram(g.points, skip);
    s.line_orbits = cycle_histogram(g.lines);
    r.fixes_only_x = r.fixes_only_x && s.fixed_points == std::vector<Index>{r.seed_x} && s.fixed_lines.empty();
    for (const auto* h : {&s.point_orbits, &s.line_orbits})
      for (auto [len, count] : *h) r.uniform_orbits = r.uniform_orbits && len == r.alpha_order;
    r.per_stage.push_back(std::move(s));
  }
  return r;
}

/// The Fano construction: the least order-3 collineation of PG(2,2) fixing
/// exactly an anti-flag (x, M), run through `stages` completion stages.
inline PipelineReport fano_pipeline(std::size_t stages, const Limits& limits = {}) {
  if (stages == 0) throw Error(ErrorCode::BudgetZero, "stage budget is zero");
  const auto fano = build_pg(2);
  const auto group = automorphism_group(fano, limits);
  auto alpha = anti_flag_only_element(fano, group, 3, limits);
  if (!alpha) throw Error(ErrorCode::PreconditionFailed, "no anti-flag-only element of order 3");
  return anti_flag_pipeline(fano, *alpha, stages, limits);
}

/// Affine plane completed projectively, plus one isolated point, then
/// free-completed (starting with lines, since the completion already has all
/// intersection points).
struct FreePointExtension {
  IncidenceStructure completion;  // the projective completion of A
  Index infinity_line = 0;        // line at infinity of A inside every stage
  Index new_point = 0;            // the isolated point
  std::vector<CompletionStage> stages;  // stage 0 = completion + new point

  const IncidenceStructure& result() const { return stages.back().structure; }
};

inline FreePointExtension extend_by_free_point(const IncidenceStructure& affine, std::size_t stages,
                                               const Limits& limits = {}) {
  if (!classify(affine).is_affine()) throw Error(ErrorCode::NotAffine, "input is not an affine plane");
  FreePointExtension r;
  auto [plane, u] = complete_affine(affine);
  r.completion = plane;
  r.infinity_line = u;
  r.new_point = static_cast<Index>(plane.npoints());
  IncidenceStructure seed(plane.npoints() + 1, plane.all_lines());
  if (stages == 0) {
    r.stages.push_back(detail::seed_stage(seed));
  } else {
    r.stages = free_complete(seed, stages, true, limits);
  }
  return r;
}

/// Removes point x and its flags, then free-completes.
struct PointDeletion {
  Restriction removed;                  // plane minus x, with index maps
  std::vector<CompletionStage> stages;  // stage 0 = plane minus x

  const IncidenceStructure& result() const { return stages.back().structure; }
};

inline PointDeletion delete_point_and_complete(const IncidenceStructure& plane, Index x,
                                               std::size_t stages, const Limits& limits = {}) {
  if (x >= plane.npoints()) throw Error(ErrorCode::BadIndex, "point " + std::to_string(x));
  PointDeletion r;
  const Index pts[] = {x};
  r.removed = remove_elements(plane, pts, {});
  if (stages == 0) {
    r.stages.push_back(detail::seed_stage(r.removed.structure));
  } else {
    r.stages = free_complete(r.removed.structure, stages, false, limits);
  }
  return r;
}

/// Incidence file followed by `birth: <element> <stage>` and
/// `pair: <element> <a> <b>` records; elements are written p<i> / l<i>.
inline void write_stage(std::ostream& out, const CompletionStage& st) {
  write_incidence(out, st.structure);
  for (Index p = 0; p < st.structure.npoints(); ++p) out << "birth: p" << p << ' ' << st.point_birth[p] << '\n';
  for (Index l = 0; l < st.structure.nlines(); ++l) out << "birth: l" << l << ' ' << st.line_birth[l] << '\n';
  for (Index p = 0; p < st.structure.npoints(); ++p)
    if (st.point_birth[p]) out << "pair: p" << p << " l" << st.point_pair[p].first << " l" << st.point_pair[p].second << '\n';
  for (Index l = 0; l < st.structure.nlines(); ++l)
    if (st.line_birth[l]) out << "pair: l" << l << " p" << st.line_pair[l].first << " p" << st.line_pair[l].second << '\n';
}

}  // namespace synline
