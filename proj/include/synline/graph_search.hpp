#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "synline/incidence.hpp"
#include "synline/perm.hpp"
#include "synline/perm_group.hpp"

namespace synline {

/// Vertex-colored simple graph with sorted adjacency lists.
struct ColoredGraph {
  std::vector<std::vector<Index>> adjacency;
  std::vector<Index> colors;

  std::size_t size() const { return adjacency.size(); }
  bool adjacent(Index a, Index b) const {
    const auto& row = adjacency[a];
    return std::binary_search(row.begin(), row.end(), b);
  }
};

/// Bipartite incidence graph: points are vertices 0..np-1 (color 0), lines
/// are np..np+nl-1 (color 1). `extra` optionally refines the initial colors
/// (same length as the vertex count; combined with the point/line split).
inline ColoredGraph incidence_graph(const IncidenceStructure& s,
                                    std::span<const Index> extra = {}) {
  const std::size_t np = s.npoints();
  ColoredGraph g;
  g.adjacency.resize(s.nelements());
  g.colors.assign(s.nelements(), 0);
  for (Index l = 0; l < s.nlines(); ++l) {
    g.colors[np + l] = 1;
    for (Index p : s.points_of_line(l)) {
      g.adjacency[p].push_back(static_cast<Index>(np + l));
      g.adjacency[np + l].push_back(p);
    }
  }
  for (auto& row : g.adjacency) std::sort(row.begin(), row.end());
  if (!extra.empty()) {
    for (std::size_t v = 0; v < g.size(); ++v) g.colors[v] += 2 * extra[v];
  }
  return g;
}

namespace detail {

inline std::size_t count_colors(const std::vector<Index>& c) {
  std::vector<Index> sorted(c);
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

/// Joint colour refinement of two colourings (left on gl, right on gr) to the
/// coarsest equitable partition. New colour ids are the ranks of the
/// signatures (old colour, sorted neighbour colours) over both sides, so the
/// same id means the same thing on both sides. Returns false as soon as the
/// colour histograms of the two sides differ.
inline bool refine(const ColoredGraph& gl, const ColoredGraph& gr, std::vector<Index>& cl,
                   std::vector<Index>& cr) {
  const std::size_t n = cl.size();
  if (cr.size() != n) return false;
  std::vector<std::vector<Index>> sig(2 * n);
  std::vector<Index> order(2 * n);
  std::size_t ncolors = 0;
  for (bool first = true;; first = false) {
    for (std::size_t v = 0; v < n; ++v) {
      auto& sl = sig[v];
      sl.assign(1, cl[v]);
      for (Index u : gl.adjacency[v]) sl.push_back(cl[u]);
      std::sort(sl.begin() + 1, sl.end());
      auto& sr = sig[n + v];
      sr.assign(1, cr[v]);
      for (Index u : gr.adjacency[v]) sr.push_back(cr[u]);
      std::sort(sr.begin() + 1, sr.end());
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (sig[a] != sig[b]) return sig[a] < sig[b];
      return a < b;
    });
    std::vector<Index> nl(n), nr(n);
    Index color = 0;
    std::size_t left_count = 0, right_count = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) {
        if (left_count != right_count) return false;
        ++color;
        left_count = right_count = 0;
      }
      if (order[i] < n) {
        nl[order[i]] = color;
        ++left_count;
      } else {
        nr[order[i] - n] = color;
        ++right_count;
      }
    }
    if (left_count != right_count) return false;
    const std::size_t now = n == 0 ? 0 : static_cast<std::size_t>(color) + 1;
    cl = std::move(nl);
    cr = std::move(nr);
    if (!first && now == ncolors) return true;
    ncolors = now;
  }
}

inline void individualize(std::vector<Index>& cl, Index v, std::vector<Index>& cr, Index w) {
  const Index fresh = std::max(*std::max_element(cl.begin(), cl.end()),
                               *std::max_element(cr.begin(), cr.end())) +
                      1;
  cl[v] = fresh;
  cr[w] = fresh;
}

/// Largest non-singleton colour class (lowest colour id on ties), or kNone.
inline Index target_cell(const std::vector<Index>& c) {
  std::vector<std::size_t> sizes(c.size() + 1, 0);
  for (Index x : c) ++sizes[x];
  Index best = kNone;
  for (Index col = 0; col < sizes.size(); ++col) {
    if (sizes[col] > 1 && (best == kNone || sizes[col] > sizes[best])) best = col;
  }
  return best;
}

inline std::vector<Index> cell_members(const std::vector<Index>& c, Index color) {
  std::vector<Index> out;
  for (Index v = 0; v < c.size(); ++v)
    if (c[v] == color) out.push_back(v);
  return out;
}

inline bool is_isomorphism(const ColoredGraph& gl, const ColoredGraph& gr,
                           const std::vector<Index>& map) {
  for (Index v = 0; v < gl.size(); ++v) {
    if (gl.colors[v] != gr.colors[map[v]]) return false;
    if (gl.adjacency[v].size() != gr.adjacency[map[v]].size()) return false;
    for (Index u : gl.adjacency[v])
      if (!gr.adjacent(map[v], map[u])) return false;
  }
  return true;
}

inline std::vector<Permutation> stabilizer_of(std::size_t degree, const std::vector<Permutation>& gens,
                                              Index x) {
  if (gens.empty()) return {};
  const Index base[] = {x};
  return schreier_sims(degree, gens, base).stabilizer_generators(1);
}

/// Depth-first individualisation/refinement search for one isomorphism
/// compatible with the (already refined, consistent) colourings.
/// `right_auts` generate automorphisms of gr preserving cr; candidates in one
/// of their orbits are tried once.
inline std::optional<Permutation> extend_isomorphism(const ColoredGraph& gl, const ColoredGraph& gr,
                                                     const std::vector<Index>& cl,
                                                     const std::vector<Index>& cr,
                                                     const std::vector<Permutation>& right_auts) {
  const Index cell = target_cell(cl);
  if (cell == kNone) {
    std::vector<Index> by_color(cl.size() + 1, kNone);
    for (Index w = 0; w < cr.size(); ++w) by_color[cr[w]] = w;
    std::vector<Index> map(cl.size());
    for (Index v = 0; v < cl.size(); ++v) map[v] = by_color[cl[v]];
    if (!is_isomorphism(gl, gr, map)) return std::nullopt;
    return Permutation(std::move(map));
  }
  const Index v = cell_members(cl, cell).front();
  std::vector<bool> tried(gr.size(), false);
  for (Index w : cell_members(cr, cell)) {
    if (tried[w]) continue;
    for (Index y : orbit_of(w, right_auts, gr.size())) tried[y] = true;
    auto nl = cl, nr = cr;
    individualize(nl, v, nr, w);
    if (!refine(gl, gr, nl, nr)) continue;
    if (auto r = extend_isomorphism(gl, gr, nl, nr, stabilizer_of(gr.size(), right_auts, w))) return r;
  }
  return std::nullopt;
}

}  // namespace detail

struct AutomorphismSearch {
  std::vector<Permutation> generators;
  std::vector<Index> base;
  /// Orbit length of base[i] under the automorphisms fixing base[0..i-1].
  std::vector<std::size_t> orbit_lengths;
  std::uint64_t order = 1;
};

/// Generators of the colour-preserving automorphism group. The base is the
/// leftmost path of the individualisation tree (target cell = largest,
/// lowest colour; vertex = least member). Levels are processed bottom-up;
/// at each level one automorphism is sought per orbit of the group found so
/// far, which makes the generator set and the order exact.
inline AutomorphismSearch automorphisms(const ColoredGraph& g) {
  AutomorphismSearch result;
  const std::size_t n = g.size();
  if (n == 0) return result;
  std::vector<std::vector<Index>> path;
  std::vector<std::vector<Index>> cells;
  {
    auto c = g.colors, d = g.colors;
    detail::refine(g, g, c, d);
    path.push_back(c);
    for (Index cell = detail::target_cell(c); cell != kNone; cell = detail::target_cell(c)) {
      auto members = detail::cell_members(c, cell);
      const Index v = members.front();
      result.base.push_back(v);
      cells.push_back(std::move(members));
      d = c;
      detail::individualize(c, v, d, v);
      detail::refine(g, g, c, d);
      path.push_back(c);
    }
  }
  const std::size_t depth = result.base.size();
  std::vector<std::size_t> level_of_generator;
  result.orbit_lengths.assign(depth, 1);
  for (std::size_t i = depth; i-- > 0;) {
    const Index b = result.base[i];
    std::vector<bool> in_orbit(n, false), dead(n, false);
    for (Index y : orbit_of(b, result.generators, n)) in_orbit[y] = true;
    for (Index w : cells[i]) {
      if (in_orbit[w] || dead[w]) continue;
      auto cl = path[i], cr = path[i];
      detail::individualize(cl, b, cr, w);
      std::optional<Permutation> hit;
      if (detail::refine(g, g, cl, cr))
        hit = detail::extend_isomorphism(g, g, cl, cr, detail::stabilizer_of(n, result.generators, w));
      if (hit) {
        result.generators.push_back(std::move(*hit));
        level_of_generator.push_back(i);
        for (Index y : orbit_of(b, result.generators, n)) in_orbit[y] = true;
      } else {
        for (Index y : orbit_of(w, result.generators, n)) dead[y] = true;
      }
    }
    result.orbit_lengths[i] = static_cast<std::size_t>(std::count(in_orbit.begin(), in_orbit.end(), true));
  }
  for (std::size_t len : result.orbit_lengths) {
    if (__builtin_mul_overflow(result.order, static_cast<std::uint64_t>(len), &result.order)) {
      throw Error(ErrorCode::OrderOverflow, "automorphism group order exceeds 64 bits");
    }
  }
  return result;
}

/// Isomorphism gl -> gr mapping each forced[i].first to forced[i].second, or
/// nullopt. Returned as the image array of gl's vertices. Automorphisms of
/// gr are computed first and prune equivalent branches.
inline std::optional<Permutation> find_isomorphism(
    const ColoredGraph& gl, const ColoredGraph& gr,
    std::span<const std::pair<Index, Index>> forced = {}) {
  if (gl.size() != gr.size()) return std::nullopt;
  if (gl.size() == 0) return Permutation(0);
  auto cl = gl.colors, cr = gr.colors;
  if (!detail::refine(gl, gr, cl, cr)) return std::nullopt;
  auto right_auts = automorphisms(gr).generators;
  for (auto [v, w] : forced) {
    if (cl[v] != cr[w]) return std::nullopt;
    detail::individualize(cl, v, cr, w);
    if (!detail::refine(gl, gr, cl, cr)) return std::nullopt;
    right_auts = detail::stabilizer_of(gr.size(), right_auts, w);
  }
  return detail::extend_isomorphism(gl, gr, cl, cr, right_auts);
}

}  // namespace synline
