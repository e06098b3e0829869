#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synline/error.hpp"
#include "synline/field.hpp"
#include "synline/perm.hpp"

namespace synline {

/// Base and strong generating set. Level i holds the strong generators
/// fixing base[0..i-1], the fundamental orbit of base[i] and one coset
/// representative per orbit point (base[i]^transversal[k] == orbit[k]).
struct StabilizerChain {
  struct Level {
    Index base_point = 0;
    std::vector<Permutation> generators;
    std::vector<Index> orbit;
    std::vector<Index> position;  // point -> index in orbit, kNone outside
    std::vector<Permutation> transversal;

    bool in_orbit(Index x) const { return position[x] != kNone; }
    const Permutation& rep(Index x) const { return transversal[position[x]]; }
  };

  std::size_t degree = 0;
  std::vector<Level> levels;

  std::vector<Index> base() const {
    std::vector<Index> out;
    for (const auto& l : levels) out.push_back(l.base_point);
    return out;
  }

  /// Strips g through the chain starting at level `from`. Returns the
  /// residue and the level at which it dropped out (levels.size() when it
  /// passed every level).
  std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t from = 0) const {
    for (std::size_t j = from; j < levels.size(); ++j) {
      const auto& level = levels[j];
      const Index image = g[level.base_point];
      if (!level.in_orbit(image)) return {std::move(g), j};
      g = g * level.rep(image).inverse();
    }
    return {std::move(g), levels.size()};
  }

  bool contains(const Permutation& g) const {
    auto [residue, level] = sift(g);
    return level == levels.size() && residue.is_identity();
  }

  std::uint64_t order() const {
    std::uint64_t result = 1;
    for (const auto& l : levels) {
      if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(l.orbit.size()), &result)) {
        throw Error(ErrorCode::OrderOverflow, "group order exceeds 64 bits");
      }
    }
    return result;
  }

  /// Generators of the pointwise stabilizer of base[0..level-1].
  std::vector<Permutation> stabilizer_generators(std::size_t level) const {
    if (level < levels.size()) return levels[level].generators;
    return {};
  }
};

namespace detail {

inline void rebuild_level(StabilizerChain::Level& level, const std::vector<Permutation>& strong,
                          std::span<const Index> base, std::size_t index, std::size_t degree) {
  level.base_point = base[index];
  level.generators.clear();
  for (const auto& s : strong) {
    bool fixes = true;
    for (std::size_t j = 0; j < index && fixes; ++j) fixes = s.fixes(base[j]);
    if (fixes) level.generators.push_back(s);
  }
  level.orbit.assign(1, level.base_point);
  level.position.assign(degree, kNone);
  level.position[level.base_point] = 0;
  level.transversal.assign(1, Permutation(degree));
  for (std::size_t i = 0; i < level.orbit.size(); ++i) {
    for (const auto& s : level.generators) {
      const Index y = s[level.orbit[i]];
      if (level.position[y] == kNone) {
        level.position[y] = static_cast<Index>(level.orbit.size());
        level.orbit.push_back(y);
        level.transversal.push_back(level.transversal[i] * s);
      }
    }
  }
}

}  // namespace detail

/// Deterministic Schreier-Sims. The base starts with `prefix` (duplicates
/// dropped) and is extended by the least point moved by the first strong
/// generator that fixes the current base.
inline StabilizerChain schreier_sims(std::size_t degree, std::span<const Permutation> generators,
                                     std::span<const Index> prefix = {}) {
  StabilizerChain chain;
  chain.degree = degree;
  std::vector<Index> base;
  for (Index b : prefix) {
    if (b >= degree) throw Error(ErrorCode::BadIndex, "base point " + std::to_string(b));
    if (std::find(base.begin(), base.end(), b) == base.end()) base.push_back(b);
  }
  std::vector<Permutation> strong;
  for (const auto& g : generators) {
    if (g.degree() != degree) throw Error(ErrorCode::PreconditionFailed, "generator degree mismatch");
    if (!g.is_identity()) strong.push_back(g);
  }
  for (const auto& s : strong) {
    bool fixes_all = std::all_of(base.begin(), base.end(), [&](Index b) { return s.fixes(b); });
    if (fixes_all) base.push_back(s.first_moved());
  }
  chain.levels.resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    detail::rebuild_level(chain.levels[i], strong, base, i, degree);
  }

  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(base.size()) - 1;
  while (i >= 0) {
    bool extended = false;
    const std::size_t orbit_size = chain.levels[i].orbit.size();
    const std::size_t ngens = chain.levels[i].generators.size();
    for (std::size_t pos = 0; !extended && pos < orbit_size; ++pos) {
      for (std::size_t g = 0; !extended && g < ngens; ++g) {
        const auto& level = chain.levels[i];
        const Permutation& s = level.generators[g];
        const Index image = s[level.orbit[pos]];
        Permutation schreier = level.transversal[pos] * s * level.rep(image).inverse();
        if (schreier.is_identity()) continue;
        auto [residue, drop] = chain.sift(std::move(schreier), static_cast<std::size_t>(i) + 1);
        if (drop == chain.levels.size() && residue.is_identity()) continue;
        if (drop == chain.levels.size()) {
          base.push_back(residue.first_moved());
          chain.levels.emplace_back();
        }
        strong.push_back(residue);
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j <= drop; ++j) {
          detail::rebuild_level(chain.levels[j], strong, base, j, degree);
        }
        i = static_cast<std::ptrdiff_t>(drop);
        extended = true;
      }
    }
    if (!extended) --i;
  }
  return chain;
}

/// Closure of the generators by breadth-first multiplication. Test oracle
/// and small-degree self-check; throws EnumerationBound past `bound`.
inline std::vector<Permutation> brute_force_closure(std::size_t degree,
                                                    std::span<const Permutation> generators,
                                                    std::uint64_t bound) {
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> queue{Permutation(degree)};
  seen.insert(queue.front());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : generators) {
      Permutation next = queue[i] * g;
      if (seen.insert(next).second) {
        if (seen.size() > bound) throw Error(ErrorCode::EnumerationBound, "closure too large");
        queue.push_back(std::move(next));
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

/// Finite permutation group given by generators. The stabilizer chain is
/// built on first use; copies share it and concurrent first use is
/// serialized.
class PermGroup {
 public:
  PermGroup() : PermGroup(0, {}) {}

  PermGroup(std::size_t degree, std::vector<Permutation> generators)
      : degree_(degree), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
    for (const auto& g : generators_) {
      if (g.degree() != degree_) {
        throw Error(ErrorCode::PreconditionFailed,
                    "generator of degree " + std::to_string(g.degree()) + " in group of degree " +
                        std::to_string(degree_));
      }
    }
  }

  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  const StabilizerChain& chain() const {
    std::call_once(cache_->once, [&] {
      cache_->chain = schreier_sims(degree_, generators_);
      self_check(*cache_->chain);
    });
    return *cache_->chain;
  }

  /// Chain whose base starts with the given points (not cached).
  StabilizerChain chain_with_base(std::span<const Index> prefix) const {
    return schreier_sims(degree_, generators_, prefix);
  }

  std::uint64_t order() const { return chain().order(); }
  bool contains(const Permutation& g) const {
    return g.degree() == degree_ && chain().contains(g);
  }
  bool is_trivial() const {
    return std::all_of(generators_.begin(), generators_.end(),
                       [](const Permutation& g) { return g.is_identity(); });
  }

  /// Calls f on every element, in chain order.
  template <class F>
  void for_each_element(F&& f) const {
    const auto& c = chain();
    Permutation acc(degree_);
    visit(c, c.levels.size(), acc, f);
  }

  /// All elements, sorted. Throws EnumerationBound above `bound`.
  std::vector<Permutation> elements(std::uint64_t bound = Limits{}.max_enumeration) const {
    const std::uint64_t n = order();
    if (n > bound) {
      throw Error(ErrorCode::EnumerationBound,
                  "group of order " + std::to_string(n) + " exceeds enumeration bound " +
                      std::to_string(bound));
    }
    std::vector<Permutation> out;
    out.reserve(n);
    for_each_element([&](const Permutation& g) { out.push_back(g); });
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Index> orbit(Index x) const { return orbit_of(x, generators_, degree_); }

  bool is_transitive() const { return degree_ == 0 || orbit(0).size() == degree_; }

 private:
  struct Cache {
    std::once_flag once;
    std::optional<StabilizerChain> chain;
  };

  template <class F>
  static void visit(const StabilizerChain& c, std::size_t level, const Permutation& acc, F& f) {
    if (level == 0) {
      f(acc);
      return;
    }
    for (const auto& t : c.levels[level - 1].transversal) visit(c, level - 1, acc * t, f);
  }

  void self_check(const StabilizerChain& c) const {
    if (degree_ > 12) return;
    std::uint64_t n = 0;
    try {
      n = c.order();
    } catch (const Error&) {
      return;
    }
    if (n > 100000) return;
    const auto closure = brute_force_closure(degree_, generators_, n + 1);
    if (closure.size() != n) throw std::logic_error("stabilizer chain disagrees with closure");
  }

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::shared_ptr<Cache> cache_;
};

/// Orbits of G on the domain, each sorted, intersected with `subset` (when
/// given) and listed by least element.
inline std::vector<std::vector<Index>> orbits(const PermGroup& g,
                                              std::optional<std::span<const Index>> subset = {}) {
  std::vector<bool> wanted(g.degree(), !subset.has_value());
  if (subset) {
    for (Index x : *subset) {
      if (x >= g.degree()) throw Error(ErrorCode::BadIndex, "point " + std::to_string(x));
      wanted[x] = true;
    }
  }
  std::vector<bool> done(g.degree(), false);
  std::vector<std::vector<Index>> out;
  for (Index x = 0; x < g.degree(); ++x) {
    if (!wanted[x] || done[x]) continue;
    auto orb = g.orbit(x);
    std::vector<Index> kept;
    for (Index y : orb) {
      done[y] = true;
      if (wanted[y]) kept.push_back(y);
    }
    std::sort(kept.begin(), kept.end());
    out.push_back(std::move(kept));
  }
  return out;
}

/// Pointwise stabilizer of the given points.
inline PermGroup pointwise_stabilizer(const PermGroup& g, std::span<const Index> points) {
  std::vector<Index> prefix;
  for (Index x : points)
    if (std::find(prefix.begin(), prefix.end(), x) == prefix.end()) prefix.push_back(x);
  auto chain = g.chain_with_base(prefix);
  return PermGroup(g.degree(), chain.stabilizer_generators(prefix.size()));
}

inline PermGroup point_stabilizer(const PermGroup& g, Index x) {
  const Index pts[] = {x};
  return pointwise_stabilizer(g, pts);
}

/// Subgroup K of G of all elements satisfying `accept`. `accept` must define a
/// subgroup; `prune(point, image)` must hold for every element of K and every
/// point, and lets the search discard partial base images early. `prefix`
/// seeds the base so that pruning bites at the top levels.
template <class Prune, class Accept>
PermGroup subgroup_search(const PermGroup& g, std::span<const Index> prefix, Prune&& prune,
                          Accept&& accept) {
  const std::size_t n = g.degree();
  const StabilizerChain chain = g.chain_with_base(prefix);
  const std::size_t depth = chain.levels.size();
  std::vector<Permutation> found;

  // Searches G^(level) u for an accepted element; suffix is the product of the
  // transversal elements already chosen above `level`.
  auto search = [&](auto&& self, std::size_t level,
                    const Permutation& suffix) -> std::optional<Permutation> {
    if (level == depth) {
      if (accept(suffix)) return suffix;
      return std::nullopt;
    }
    const auto& lv = chain.levels[level];
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      const Index image = suffix[lv.orbit[k]];
      if (!prune(lv.base_point, image)) continue;
      if (auto r = self(self, level + 1, lv.transversal[k] * suffix)) return r;
    }
    return std::nullopt;
  };

  for (std::size_t i = depth; i-- > 0;) {
    const auto& lv = chain.levels[i];
    std::vector<Index> candidates = lv.orbit;
    std::sort(candidates.begin(), candidates.end());
    std::vector<bool> dead(n, false);
    auto k_orbit = orbit_of(lv.base_point, found, n);
    std::vector<bool> in_k(n, false);
    for (Index y : k_orbit) in_k[y] = true;
    for (Index gamma : candidates) {
      if (in_k[gamma] || dead[gamma]) continue;
      if (!prune(lv.base_point, gamma)) {
        dead[gamma] = true;
        continue;
      }
      auto hit = search(search, i + 1, lv.rep(gamma));
      if (hit) {
        found.push_back(*hit);
        for (Index y : orbit_of(lv.base_point, found, n)) in_k[y] = true;
      } else {
        for (Index y : orbit_of(gamma, found, n)) dead[y] = true;
      }
    }
  }
  return PermGroup(n, std::move(found));
}

/// Setwise stabilizer of a subset of the domain.
inline PermGroup setwise_stabilizer(const PermGroup& g, std::span<const Index> set) {
  std::vector<bool> member(g.degree(), false);
  for (Index x : set) member.at(x) = true;
  std::vector<Index> prefix(set.begin(), set.end());
  std::sort(prefix.begin(), prefix.end());
  prefix.erase(std::unique(prefix.begin(), prefix.end()), prefix.end());
  auto prune = [&](Index point, Index image) { return member[point] == member[image]; };
  auto accept = [&](const Permutation& p) {
    return std::all_of(prefix.begin(), prefix.end(), [&](Index x) { return member[p[x]]; });
  };
  return subgroup_search(g, prefix, prune, accept);
}

inline bool is_subgroup(const PermGroup& h, const PermGroup& g) {
  return std::all_of(h.generators().begin(), h.generators().end(),
                     [&](const Permutation& x) { return g.contains(x); });
}

inline bool is_normal_subgroup(const PermGroup& n, const PermGroup& g) {
  if (!is_subgroup(n, g)) return false;
  for (const auto& x : g.generators())
    for (const auto& y : n.generators())
      if (!n.contains(y.conjugate_by(x))) return false;
  return true;
}

/// True iff G is transitive on ordered k-tuples of distinct points with
/// trivial tuple stabilizers.
inline bool is_sharply_k_transitive(const PermGroup& g, std::size_t k) {
  const std::size_t n = g.degree();
  if (k == 0) return g.order() == 1;
  if (n < k) return false;
  std::vector<Index> prefix(k);
  std::iota(prefix.begin(), prefix.end(), Index{0});
  const auto chain = g.chain_with_base(prefix);
  std::uint64_t expected = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (chain.levels[i].orbit.size() != n - i) return false;
    expected *= n - i;
  }
  return chain.order() == expected;
}

struct ZassenhausReport {
  bool applicable = false;  // G sharply 2-transitive
  std::size_t degree = 0;
  bool prime_power = false;
  std::uint32_t prime = 0;
  std::uint32_t exponent = 0;
};

/// For a sharply 2-transitive group, confirms the degree is a prime power.
inline ZassenhausReport zassenhaus_predicate(const PermGroup& g) {
  ZassenhausReport r;
  r.degree = g.degree();
  r.applicable = is_sharply_k_transitive(g, 2);
  if (!r.applicable) return r;
  if (auto pp = prime_power(g.degree())) {
    r.prime_power = true;
    r.prime = pp->first;
    r.exponent = pp->second;
  }
  return r;
}

struct BlockSystem {
  std::vector<std::vector<Index>> blocks;
};

/// Induced action of the generators on a block system (blocks must be
/// invariant). Returns nullopt when some generator breaks a block.
inline std::optional<PermGroup> action_on_blocks(const PermGroup& g, const BlockSystem& system) {
  std::vector<Index> block_of(g.degree(), kNone);
  for (Index b = 0; b < system.blocks.size(); ++b)
    for (Index x : system.blocks[b]) block_of.at(x) = b;
  if (std::find(block_of.begin(), block_of.end(), kNone) != block_of.end()) return std::nullopt;
  std::vector<Permutation> induced;
  for (const auto& gen : g.generators()) {
    std::vector<Index> images(system.blocks.size());
    for (Index b = 0; b < system.blocks.size(); ++b) {
      const Index target = block_of[gen[system.blocks[b].front()]];
      for (Index x : system.blocks[b]) {
        if (block_of[gen[x]] != target) return std::nullopt;
      }
      images[b] = target;
    }
    induced.emplace_back(std::move(images));
  }
  return PermGroup(system.blocks.size(), std::move(induced));
}

struct GenerationReport {
  std::uint64_t group_order = 0;
  std::uint64_t generated_order = 0;
  bool equals_group = false;
  std::optional<BlockSystem> witness;
  /// Witness is G-invariant and G acts regularly on its blocks.
  bool witness_verified = false;
  PermGroup generated;
};

/// Decides whether a transitive G is generated by its point stabilizers.
/// When not, the orbits of the generated (normal) subgroup form a block
/// system on which G acts sharply transitively; singleton blocks count as a
/// proper system, the one-block system does not.
inline GenerationReport point_stabilizer_generation(const PermGroup& g) {
  if (!g.is_transitive()) throw Error(ErrorCode::NotTransitive, "group is not transitive");
  GenerationReport r;
  r.group_order = g.order();
  const Index zero[] = {0};
  const auto chain = g.chain_with_base(zero);
  const auto stab0 = chain.stabilizer_generators(1);
  std::vector<Permutation> gens;
  if (!chain.levels.empty()) {
    const auto& top = chain.levels[0];
    for (std::size_t k = 0; k < top.orbit.size(); ++k) {
      for (const auto& s : stab0) gens.push_back(s.conjugate_by(top.transversal[k]));
    }
  }
  r.generated = PermGroup(g.degree(), std::move(gens));
  r.generated_order = r.generated.order();
  r.equals_group = r.generated_order == r.group_order;
  if (!r.equals_group) {
    BlockSystem system{orbits(r.generated)};
    if (auto induced = action_on_blocks(g, system)) {
      r.witness_verified = system.blocks.size() > 1 && induced->is_transitive() &&
                           induced->order() == system.blocks.size();
    }
    r.witness = std::move(system);
  }
  return r;
}

}  // namespace synline
