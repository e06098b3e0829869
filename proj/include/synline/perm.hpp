#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "synline/error.hpp"
#include "synline/incidence.hpp"

namespace synline {

/// Permutation of {0..degree-1} stored as its image array. Products follow
/// the right-action convention used throughout: (a * b) applies a first,
/// then b, so x^(ab) = (x^a)^b.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Index{0});
  }

  /// Throws PreconditionFailed when images is not a bijection.
  explicit Permutation(std::vector<Index> images) : images_(std::move(images)) {
    std::vector<bool> hit(images_.size(), false);
    for (Index x : images_) {
      if (x >= images_.size() || hit[x]) {
        throw Error(ErrorCode::PreconditionFailed, "image array is not a bijection");
      }
      hit[x] = true;
    }
  }

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  /// Builds from disjoint cycles.
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Index>>& cycles) {
    std::vector<Index> images(degree);
    std::iota(images.begin(), images.end(), Index{0});
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        images.at(cycle[i]) = cycle[(i + 1) % cycle.size()];
      }
    }
    return Permutation(std::move(images));
  }

  std::size_t degree() const { return images_.size(); }
  Index operator[](Index x) const { return images_[x]; }
  Index apply(Index x) const { return images_[x]; }
  const std::vector<Index>& images() const { return images_; }

  Permutation operator*(const Permutation& other) const {
    Permutation out;
    out.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out.images_[i] = other.images_[images_[i]];
    return out;
  }

  Permutation inverse() const {
    Permutation out;
    out.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out.images_[images_[i]] = static_cast<Index>(i);
    return out;
  }

  /// g^-1 * this * g; fixes x^g whenever this fixes x.
  Permutation conjugate_by(const Permutation& g) const { return g.inverse() * *this * g; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  bool fixes(Index x) const { return images_[x] == x; }

  Index first_moved() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return static_cast<Index>(i);
    return kNone;
  }

  std::vector<Index> fixed_points() const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] == i) out.push_back(static_cast<Index>(i));
    return out;
  }

  std::uint64_t order() const {
    std::vector<bool> seen(images_.size(), false);
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      for (Index j = static_cast<Index>(i); !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  Permutation power(std::uint64_t e) const {
    Permutation result(degree()), base = *this;
    for (; e; e >>= 1) {
      if (e & 1) result = result * base;
      base = base * base;
    }
    return result;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Index x : p.images()) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// Orbit of x under the given generators, in BFS discovery order.
inline std::vector<Index> orbit_of(Index x, std::span<const Permutation> gens, std::size_t degree) {
  std::vector<bool> seen(degree, false);
  std::vector<Index> orbit{x};
  seen[x] = true;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& g : gens) {
      Index y = g[orbit[i]];
      if (!seen[y]) {
        seen[y] = true;
        orbit.push_back(y);
      }
    }
  }
  return orbit;
}

}  // namespace synline
