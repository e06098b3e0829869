#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "synline/error.hpp"
#include "synline/field.hpp"

namespace synline {

using Index = std::uint32_t;
inline constexpr Index kNone = static_cast<Index>(-1);

/// Finite point-line incidence structure. Immutable once constructed; both
/// incidence lists are kept sorted and dual-consistent.
class IncidenceStructure {
 public:
  IncidenceStructure() = default;

  /// Builds from the point sets of the lines. Throws BadIndex on an out of
  /// range point and DuplicateFlag when a point is listed twice on a line.
  IncidenceStructure(std::size_t npoints, std::vector<std::vector<Index>> points_of_line)
      : npoints_(npoints), points_of_line_(std::move(points_of_line)) {
    lines_of_point_.assign(npoints_, {});
    for (Index line = 0; line < points_of_line_.size(); ++line) {
      auto& pts = points_of_line_[line];
      std::sort(pts.begin(), pts.end());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] >= npoints_) {
          throw Error(ErrorCode::BadIndex, "point " + std::to_string(pts[i]) + " on line " +
                                               std::to_string(line) + " out of range");
        }
        if (i > 0 && pts[i] == pts[i - 1]) {
          throw Error(ErrorCode::DuplicateFlag, "flag (" + std::to_string(pts[i]) + ", " +
                                                    std::to_string(line) + ") repeated");
        }
        lines_of_point_[pts[i]].push_back(line);
      }
    }
  }

  std::size_t npoints() const { return npoints_; }
  std::size_t nlines() const { return points_of_line_.size(); }
  std::size_t nelements() const { return npoints_ + nlines(); }

  std::span<const Index> points_of_line(Index line) const { return points_of_line_[line]; }
  std::span<const Index> lines_of_point(Index point) const { return lines_of_point_[point]; }
  const std::vector<std::vector<Index>>& all_lines() const { return points_of_line_; }

  bool incident(Index point, Index line) const {
    const auto& pts = points_of_line_[line];
    return std::binary_search(pts.begin(), pts.end(), point);
  }

  std::size_t nflags() const {
    std::size_t n = 0;
    for (const auto& pts : points_of_line_) n += pts.size();
    return n;
  }

  /// Lines through both points (sorted).
  std::vector<Index> common_lines(Index a, Index b) const {
    std::vector<Index> out;
    std::set_intersection(lines_of_point_[a].begin(), lines_of_point_[a].end(),
                          lines_of_point_[b].begin(), lines_of_point_[b].end(),
                          std::back_inserter(out));
    return out;
  }

  /// Points on both lines (sorted).
  std::vector<Index> common_points(Index a, Index b) const {
    std::vector<Index> out;
    std::set_intersection(points_of_line_[a].begin(), points_of_line_[a].end(),
                          points_of_line_[b].begin(), points_of_line_[b].end(),
                          std::back_inserter(out));
    return out;
  }

  /// Unique joining line, or kNone.
  Index join(Index a, Index b) const {
    auto lines = common_lines(a, b);
    return lines.size() == 1 ? lines.front() : kNone;
  }

  /// Unique meeting point, or kNone.
  Index meet(Index a, Index b) const {
    auto pts = common_points(a, b);
    return pts.size() == 1 ? pts.front() : kNone;
  }

  bool operator==(const IncidenceStructure& other) const {
    return npoints_ == other.npoints_ && points_of_line_ == other.points_of_line_;
  }

  /// Rebuilds the point-side lists from the line side and compares.
  bool dual_consistent() const {
    std::vector<std::vector<Index>> rebuilt(npoints_);
    for (Index line = 0; line < nlines(); ++line) {
      for (Index p : points_of_line_[line]) {
        if (p >= npoints_) return false;
        rebuilt[p].push_back(line);
      }
    }
    return rebuilt == lines_of_point_;
  }

 private:
  std::size_t npoints_ = 0;
  std::vector<std::vector<Index>> points_of_line_;
  std::vector<std::vector<Index>> lines_of_point_;
};

/// Points become lines and lines become points.
inline IncidenceStructure dual(const IncidenceStructure& s) {
  std::vector<std::vector<Index>> lines(s.npoints());
  for (Index p = 0; p < s.npoints(); ++p) {
    auto l = s.lines_of_point(p);
    lines[p].assign(l.begin(), l.end());
  }
  return IncidenceStructure(s.nlines(), std::move(lines));
}

enum class PlaneTag { ProjectivePlane, AffinePlane, PartialLinear, Degenerate, Invalid };

inline std::string_view to_string(PlaneTag tag) {
  switch (tag) {
    case PlaneTag::ProjectivePlane: return "ProjectivePlane";
    case PlaneTag::AffinePlane: return "AffinePlane";
    case PlaneTag::PartialLinear: return "PartialLinear";
    case PlaneTag::Degenerate: return "Degenerate";
    case PlaneTag::Invalid: return "Invalid";
  }
  return "Invalid";
}

struct PlaneClass {
  PlaneTag tag = PlaneTag::Invalid;
  std::optional<std::size_t> order;
  std::optional<std::string> reason;

  bool is_projective() const { return tag == PlaneTag::ProjectivePlane; }
  bool is_affine() const { return tag == PlaneTag::AffinePlane; }
};

namespace detail {

inline bool has_quadrangle(const IncidenceStructure& s) {
  const Index n = static_cast<Index>(s.npoints());
  auto collinear = [&](Index a, Index b, Index c) {
    Index l = s.join(a, b);
    return l != kNone && s.incident(c, l);
  };
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      for (Index c = b + 1; c < n; ++c) {
        if (collinear(a, b, c)) continue;
        for (Index d = c + 1; d < n; ++d) {
          if (!collinear(a, b, d) && !collinear(a, c, d) && !collinear(b, c, d)) return true;
        }
      }
    }
  }
  return false;
}

inline bool has_triangle(const IncidenceStructure& s) {
  const Index n = static_cast<Index>(s.npoints());
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      Index l = s.join(a, b);
      if (l == kNone) continue;
      for (Index c = b + 1; c < n; ++c) {
        if (!s.incident(c, l)) return true;
      }
    }
  }
  return false;
}

}  // namespace detail

/// Classifies by exhaustive axiom check.
inline PlaneClass classify(const IncidenceStructure& s) {
  const std::size_t np = s.npoints(), nl = s.nlines();
  // Any two points on at most one line: each point's neighbours along its
  // lines must all be distinct.
  std::vector<Index> stamp(np, kNone);
  std::size_t joined_pairs = 0;
  for (Index p = 0; p < np; ++p) {
    for (Index line : s.lines_of_point(p)) {
      for (Index q : s.points_of_line(line)) {
        if (q == p) continue;
        if (stamp[q] == p) {
          return {PlaneTag::Invalid, std::nullopt,
                  "points " + std::to_string(std::min(p, q)) + " and " +
                      std::to_string(std::max(p, q)) + " share at least two lines"};
        }
        stamp[q] = p;
        if (q > p) ++joined_pairs;
      }
    }
  }
  std::size_t meeting_pairs = 0;
  for (Index p = 0; p < np; ++p) {
    const std::size_t r = s.lines_of_point(p).size();
    meeting_pairs += r * (r - (r > 0 ? 1 : 0)) / 2;
  }
  const bool all_joined = joined_pairs == np * (np - (np > 0 ? 1 : 0)) / 2;
  const bool all_meet = meeting_pairs == nl * (nl - (nl > 0 ? 1 : 0)) / 2;

  if (all_joined && all_meet) {
    if (np > 0 && nl > 0 && detail::has_quadrangle(s)) {
      const std::size_t k = s.points_of_line(0).size();
      return {PlaneTag::ProjectivePlane, k - 1, std::nullopt};
    }
    return {PlaneTag::Degenerate, std::nullopt, "no quadrangle"};
  }
  if (all_joined && np > 0 && nl > 0) {
    bool playfair = true;
    std::string why;
    for (Index a = 0; a < np && playfair; ++a) {
      for (Index line = 0; line < nl && playfair; ++line) {
        if (s.incident(a, line)) continue;
        std::size_t parallels = 0;
        for (Index m : s.lines_of_point(a)) {
          if (s.common_points(m, line).empty()) ++parallels;
        }
        if (parallels != 1) {
          playfair = false;
          why = "anti-flag (" + std::to_string(a) + ", " + std::to_string(line) + ") has " +
                std::to_string(parallels) + " parallels";
        }
      }
    }
    if (playfair && detail::has_triangle(s)) {
      return {PlaneTag::AffinePlane, s.points_of_line(0).size(), std::nullopt};
    }
    return {PlaneTag::PartialLinear, std::nullopt, playfair ? "no triangle" : why};
  }
  return {PlaneTag::PartialLinear, std::nullopt,
          all_joined ? "some lines do not meet" : "some points are not joined"};
}

/// The Desarguesian plane PG(2,q). Points and lines are the normalized
/// nonzero triples over GF(q) (last nonzero coordinate equal to 1) in
/// lexicographic order; incidence is a zero dot product.
inline IncidenceStructure build_pg(std::uint64_t q, const Limits& limits = {}) {
  const FiniteField field = build_field_of_order(q, limits);
  const std::uint64_t n = q * q + q + 1;
  check_size(2 * n, limits, "PG(2," + std::to_string(q) + ")");
  std::vector<std::array<std::uint32_t, 3>> triples;
  triples.reserve(n);
  const std::uint32_t qq = field.size();
  for (std::uint32_t a = 0; a < qq; ++a) {
    for (std::uint32_t b = 0; b < qq; ++b) {
      for (std::uint32_t c = 0; c < qq; ++c) {
        std::array<std::uint32_t, 3> t{a, b, c};
        int last = 2;
        while (last >= 0 && t[last] == 0) --last;
        if (last >= 0 && t[last] == 1) triples.push_back(t);
      }
    }
  }
  std::vector<std::vector<Index>> lines(n);
  for (Index l = 0; l < n; ++l) {
    for (Index p = 0; p < n; ++p) {
      std::uint32_t dot = 0;
      for (int i = 0; i < 3; ++i) dot = field.add(dot, field.mul(triples[p][i], triples[l][i]));
      if (dot == 0) lines[l].push_back(p);
    }
  }
  return IncidenceStructure(n, std::move(lines));
}

/// Coordinates of the points of PG(2,q) in build_pg's order.
inline std::vector<std::array<std::uint32_t, 3>> pg_coordinates(const FiniteField& field) {
  std::vector<std::array<std::uint32_t, 3>> triples;
  const std::uint32_t qq = field.size();
  for (std::uint32_t a = 0; a < qq; ++a)
    for (std::uint32_t b = 0; b < qq; ++b)
      for (std::uint32_t c = 0; c < qq; ++c) {
        std::array<std::uint32_t, 3> t{a, b, c};
        int last = 2;
        while (last >= 0 && t[last] == 0) --last;
        if (last >= 0 && t[last] == 1) triples.push_back(t);
      }
  return triples;
}

/// Result of removing elements: the substructure plus index maps both ways.
struct Restriction {
  IncidenceStructure structure;
  std::vector<Index> point_to_parent;  // new -> old
  std::vector<Index> line_to_parent;
  std::vector<Index> point_from_parent;  // old -> new or kNone
  std::vector<Index> line_from_parent;
};

/// Induced substructure on the kept elements (flags among kept elements stay).
inline Restriction restrict_to(const IncidenceStructure& s, const std::vector<bool>& keep_point,
                               const std::vector<bool>& keep_line) {
  Restriction r;
  r.point_from_parent.assign(s.npoints(), kNone);
  r.line_from_parent.assign(s.nlines(), kNone);
  for (Index p = 0; p < s.npoints(); ++p) {
    if (keep_point[p]) {
      r.point_from_parent[p] = static_cast<Index>(r.point_to_parent.size());
      r.point_to_parent.push_back(p);
    }
  }
  std::vector<std::vector<Index>> lines;
  for (Index l = 0; l < s.nlines(); ++l) {
    if (!keep_line[l]) continue;
    r.line_from_parent[l] = static_cast<Index>(r.line_to_parent.size());
    r.line_to_parent.push_back(l);
    std::vector<Index> pts;
    for (Index p : s.points_of_line(l)) {
      if (keep_point[p]) pts.push_back(r.point_from_parent[p]);
    }
    lines.push_back(std::move(pts));
  }
  r.structure = IncidenceStructure(r.point_to_parent.size(), std::move(lines));
  return r;
}

/// Removes the listed points and lines.
inline Restriction remove_elements(const IncidenceStructure& s, std::span<const Index> points,
                                   std::span<const Index> lines) {
  std::vector<bool> keep_point(s.npoints(), true), keep_line(s.nlines(), true);
  for (Index p : points) {
    if (p >= s.npoints()) throw Error(ErrorCode::BadIndex, "point " + std::to_string(p));
    keep_point[p] = false;
  }
  for (Index l : lines) {
    if (l >= s.nlines()) throw Error(ErrorCode::BadIndex, "line " + std::to_string(l));
    keep_line[l] = false;
  }
  return restrict_to(s, keep_point, keep_line);
}

/// Affine plane obtained from a projective plane by deleting a line and its
/// points, with index maps to the parent and its parallel classes.
struct AffineDerivation {
  IncidenceStructure structure;
  Index deleted_line = kNone;
  std::vector<Index> point_to_parent;
  std::vector<Index> line_to_parent;
  /// Parallel classes of affine lines, one per point of the deleted line, in
  /// the order of that line's points.
  std::vector<std::vector<Index>> parallel_classes;
  /// Parent point on the deleted line that defines each class.
  std::vector<Index> class_point;
};

inline AffineDerivation delete_line(const IncidenceStructure& plane, Index line) {
  if (line >= plane.nlines()) throw Error(ErrorCode::BadIndex, "line " + std::to_string(line));
  if (!classify(plane).is_projective()) throw Error(ErrorCode::NotAPlane, "delete_line input");
  std::vector<Index> removed_line{line};
  auto pts = plane.points_of_line(line);
  auto r = remove_elements(plane, pts, removed_line);
  AffineDerivation d;
  d.deleted_line = line;
  d.point_to_parent = r.point_to_parent;
  d.line_to_parent = r.line_to_parent;
  for (Index u : pts) {
    std::vector<Index> cls;
    for (Index m : plane.lines_of_point(u)) {
      if (m != line) cls.push_back(r.line_from_parent[m]);
    }
    std::sort(cls.begin(), cls.end());
    d.parallel_classes.push_back(std::move(cls));
    d.class_point.push_back(u);
  }
  d.structure = std::move(r.structure);
  return d;
}

/// Parallel classes of an affine plane (lines equal or disjoint), ordered by
/// least member.
inline std::vector<std::vector<Index>> parallel_classes(const IncidenceStructure& affine) {
  std::vector<Index> cls(affine.nlines(), kNone);
  std::vector<std::vector<Index>> out;
  for (Index l = 0; l < affine.nlines(); ++l) {
    if (cls[l] != kNone) continue;
    cls[l] = static_cast<Index>(out.size());
    out.push_back({l});
    for (Index m = l + 1; m < affine.nlines(); ++m) {
      if (cls[m] == kNone && affine.common_points(l, m).empty()) {
        cls[m] = cls[l];
        out.back().push_back(m);
      }
    }
  }
  return out;
}

/// Projective completion: one new point per parallel class (appended in
/// class order) and one new line through exactly the new points (the last
/// line). Returns the plane and the index of the new line.
inline std::pair<IncidenceStructure, Index> complete_affine(const IncidenceStructure& affine) {
  if (!classify(affine).is_affine()) throw Error(ErrorCode::NotAffine, "complete_affine input");
  auto classes = parallel_classes(affine);
  std::vector<std::vector<Index>> lines(affine.all_lines());
  const Index base = static_cast<Index>(affine.npoints());
  std::vector<Index> infinity;
  for (Index c = 0; c < classes.size(); ++c) {
    for (Index l : classes[c]) lines[l].push_back(base + c);
    infinity.push_back(base + c);
  }
  lines.push_back(infinity);
  const Index u = static_cast<Index>(lines.size() - 1);
  return {IncidenceStructure(affine.npoints() + classes.size(), std::move(lines)), u};
}

/// AG(2,q) as PG(2,q) with its last line deleted.
inline AffineDerivation build_ag(std::uint64_t q, const Limits& limits = {}) {
  auto plane = build_pg(q, limits);
  return delete_line(plane, static_cast<Index>(plane.nlines() - 1));
}

/// 0/1 point-by-line matrix, row-major.
struct IncidenceMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::vector<std::size_t> row_sums() const {
    std::vector<std::size_t> out(rows, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out[i] += data[i * cols + j];
    return out;
  }
  std::vector<std::size_t> column_sums() const {
    std::vector<std::size_t> out(cols, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out[j] += data[i * cols + j];
    return out;
  }
};

inline IncidenceMatrix incidence_matrix(const IncidenceStructure& s) {
  IncidenceMatrix m{s.npoints(), s.nlines(), std::vector<std::uint8_t>(s.npoints() * s.nlines(), 0)};
  for (Index l = 0; l < s.nlines(); ++l)
    for (Index p : s.points_of_line(l)) m.data[p * m.cols + l] = 1;
  return m;
}

/// The Desargues configuration: points are the 2-subsets of {0..4}, lines the
/// 3-subsets, incidence is containment (10 points, 10 lines, 3 per line).
inline IncidenceStructure desargues_configuration() {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) pairs.emplace_back(a, b);
  std::vector<std::vector<Index>> lines;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c) {
        std::vector<Index> pts;
        for (Index i = 0; i < pairs.size(); ++i) {
          auto [x, y] = pairs[i];
          auto in = [&](int v) { return v == a || v == b || v == c; };
          if (in(x) && in(y)) pts.push_back(i);
        }
        lines.push_back(std::move(pts));
      }
  return IncidenceStructure(10, std::move(lines));
}

/// Thin triangle: line 0 = {0,1}, line 1 = {1,2}, line 2 = {0,2}.
inline IncidenceStructure triangle() {
  return IncidenceStructure(3, {{0, 1}, {1, 2}, {0, 2}});
}

}  // namespace synline
