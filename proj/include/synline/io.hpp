#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "synline/error.hpp"
#include "synline/incidence.hpp"
#include "synline/perm.hpp"

namespace synline {

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

inline std::vector<Index> parse_indices(std::istringstream& ss, std::size_t line_no) {
  std::vector<Index> out;
  std::string token;
  while (ss >> token) {
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(token, &used);
      if (used != token.size() || value >= kNone) parse_fail(line_no, "bad index '" + token + "'");
      out.push_back(static_cast<Index>(value));
    } catch (const std::logic_error&) {
      parse_fail(line_no, "bad index '" + token + "'");
    }
  }
  return out;
}

/// Splits "<index>: rest" and returns the index; rest is left in `ss`.
inline Index parse_label(const std::string& line, std::size_t line_no, std::istringstream& ss) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) parse_fail(line_no, "expected '<index>:'");
  std::istringstream head(line.substr(0, colon));
  auto idx = parse_indices(head, line_no);
  if (idx.size() != 1) parse_fail(line_no, "expected one index before ':'");
  ss.str(line.substr(colon + 1));
  return idx.front();
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return in;
}

}  // namespace detail

/// `incidence v1 <npoints> <nlines>` followed by `<line>: p1 p2 ...`.
inline void write_incidence(std::ostream& out, const IncidenceStructure& s) {
  out << "incidence v1 " << s.npoints() << ' ' << s.nlines() << '\n';
  for (Index l = 0; l < s.nlines(); ++l) {
    out << l << ':';
    for (Index p : s.points_of_line(l)) out << ' ' << p;
    out << '\n';
  }
}

inline std::string to_incidence_text(const IncidenceStructure& s) {
  std::ostringstream out;
  write_incidence(out, s);
  return out.str();
}

/// Parses the incidence grammar. Every line index must appear exactly once;
/// points must be listed in ascending order. A repeated point on a line is
/// DuplicateFlag; any other defect is ParseError.
inline IncidenceStructure read_incidence(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!detail::next_content_line(in, line, line_no)) detail::parse_fail(line_no, "empty input");
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "incidence" || version != "v1") detail::parse_fail(line_no, "expected 'incidence v1'");
  auto sizes = detail::parse_indices(header, line_no);
  if (sizes.size() != 2) detail::parse_fail(line_no, "expected '<npoints> <nlines>'");
  const std::size_t np = sizes[0], nl = sizes[1];
  std::vector<std::vector<Index>> lines(nl);
  std::vector<bool> seen(nl, false);
  for (std::size_t k = 0; k < nl; ++k) {
    if (!detail::next_content_line(in, line, line_no)) detail::parse_fail(line_no, "missing lines");
    std::istringstream ss;
    const Index l = detail::parse_label(line, line_no, ss);
    if (l >= nl) detail::parse_fail(line_no, "line index " + std::to_string(l) + " out of range");
    if (seen[l]) detail::parse_fail(line_no, "line " + std::to_string(l) + " listed twice");
    seen[l] = true;
    auto pts = detail::parse_indices(ss, line_no);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] >= np) detail::parse_fail(line_no, "point " + std::to_string(pts[i]) + " out of range");
      for (std::size_t j = 0; j < i; ++j) {
        if (pts[j] == pts[i]) {
          throw Error(ErrorCode::DuplicateFlag, "line " + std::to_string(line_no) + ": flag (" +
                                                    std::to_string(pts[i]) + ", " +
                                                    std::to_string(l) + ") repeated");
        }
      }
      if (i > 0 && pts[i] < pts[i - 1]) detail::parse_fail(line_no, "points not ascending");
    }
    lines[l] = std::move(pts);
  }
  if (detail::next_content_line(in, line, line_no)) detail::parse_fail(line_no, "trailing content");
  return IncidenceStructure(np, std::move(lines));
}

inline IncidenceStructure parse_incidence(const std::string& text) {
  std::istringstream in(text);
  return read_incidence(in);
}

inline IncidenceStructure load_incidence(const std::string& path) {
  auto in = detail::open_input(path);
  return read_incidence(in);
}

/// `perm v1 <degree> i0 i1 ...`
inline std::string to_perm_text(const Permutation& g) {
  std::string out = "perm v1 " + std::to_string(g.degree());
  for (Index x : g.images()) out += ' ' + std::to_string(x);
  return out;
}

inline Permutation parse_perm(const std::string& line, std::size_t line_no = 1) {
  std::istringstream ss(line);
  std::string magic, version;
  ss >> magic >> version;
  if (magic != "perm" || version != "v1") detail::parse_fail(line_no, "expected 'perm v1'");
  auto values = detail::parse_indices(ss, line_no);
  if (values.empty() || values.size() != values[0] + std::size_t{1})
    detail::parse_fail(line_no, "image count does not match degree");
  std::vector<Index> images(values.begin() + 1, values.end());
  try {
    return Permutation(std::move(images));
  } catch (const Error&) {
    detail::parse_fail(line_no, "images are not a permutation");
  }
}

/// One `perm v1` line per generator.
inline std::vector<Permutation> read_perms(std::istream& in) {
  std::vector<Permutation> out;
  std::string line;
  std::size_t line_no = 0;
  while (detail::next_content_line(in, line, line_no)) out.push_back(parse_perm(line, line_no));
  return out;
}

/// Point and line maps of a morphism between two structures.
struct MorphismMaps {
  std::vector<Index> point_map;
  std::vector<Index> line_map;
};

/// `morph v1` then `p: i -> j` and `l: i -> j` records (any order).
inline void write_morphism(std::ostream& out, const MorphismMaps& m) {
  out << "morph v1\n";
  for (Index i = 0; i < m.point_map.size(); ++i) out << "p: " << i << " -> " << m.point_map[i] << '\n';
  for (Index i = 0; i < m.line_map.size(); ++i) out << "l: " << i << " -> " << m.line_map[i] << '\n';
}

inline MorphismMaps read_morphism(std::istream& in, std::size_t npoints, std::size_t nlines) {
  std::string line;
  std::size_t line_no = 0;
  if (!detail::next_content_line(in, line, line_no) || line.rfind("morph v1", 0) != 0)
    detail::parse_fail(line_no, "expected 'morph v1'");
  MorphismMaps m{std::vector<Index>(npoints, kNone), std::vector<Index>(nlines, kNone)};
  while (detail::next_content_line(in, line, line_no)) {
    std::istringstream ss(line);
    std::string kind, arrow;
    long long from = -1, to = -1;
    if (!(ss >> kind >> from >> arrow >> to) || arrow != "->" || from < 0 || to < 0)
      detail::parse_fail(line_no, "expected '<p|l>: i -> j'");
    std::string extra;
    if (ss >> extra) detail::parse_fail(line_no, "trailing token '" + extra + "'");
    std::vector<Index>* map = nullptr;
    if (kind == "p:") map = &m.point_map;
    else if (kind == "l:") map = &m.line_map;
    else detail::parse_fail(line_no, "unknown record '" + kind + "'");
    if (static_cast<std::size_t>(from) >= map->size()) detail::parse_fail(line_no, "source index out of range");
    if ((*map)[from] != kNone) detail::parse_fail(line_no, "source index mapped twice");
    (*map)[from] = static_cast<Index>(to);
  }
  for (Index x : m.point_map)
    if (x == kNone) detail::parse_fail(line_no, "point map is not total");
  for (Index x : m.line_map)
    if (x == kNone) detail::parse_fail(line_no, "line map is not total");
  return m;
}

/// Point and line subsets of a host structure.
struct SubsetSpec {
  std::vector<Index> points;
  std::vector<Index> lines;
};

/// `sub v1`, `P: i j ...`, `L: i j ...`.
inline void write_subset(std::ostream& out, const SubsetSpec& s) {
  out << "sub v1\nP:";
  for (Index p : s.points) out << ' ' << p;
  out << "\nL:";
  for (Index l : s.lines) out << ' ' << l;
  out << '\n';
}

inline SubsetSpec read_subset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!detail::next_content_line(in, line, line_no) || line.rfind("sub v1", 0) != 0)
    detail::parse_fail(line_no, "expected 'sub v1'");
  SubsetSpec s;
  bool have_p = false, have_l = false;
  while (detail::next_content_line(in, line, line_no)) {
    const auto colon = line.find(':');
    const std::string key = line.substr(0, colon);
    if (colon == std::string::npos || (key != "P" && key != "L"))
      detail::parse_fail(line_no, "expected 'P:' or 'L:'");
    std::istringstream ss(line.substr(colon + 1));
    auto values = detail::parse_indices(ss, line_no);
    bool& flag = key == "P" ? have_p : have_l;
    if (flag) detail::parse_fail(line_no, key + ": given twice");
    flag = true;
    (key == "P" ? s.points : s.lines) = std::move(values);
  }
  std::sort(s.points.begin(), s.points.end());
  std::sort(s.lines.begin(), s.lines.end());
  return s;
}

}  // namespace synline
