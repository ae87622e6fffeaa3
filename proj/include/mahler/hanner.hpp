// Hanner polytopes: segments closed under Cartesian product and l1-sum.
//
// Expressions are written over S (the segment [-1, 1]), X(a, b, ...) for the
// Cartesian product and L(a, b, ...) for the l1-sum, e.g. "X(S, L(S,S))".

#pragma once

#include "mahler/polytope.hpp"

#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace mahler {

struct HannerTree {
  enum class Kind { Segment, Product, Sum };
  Kind kind = Kind::Segment;
  std::vector<HannerTree> children;

  static HannerTree parse(std::string_view expr);
  std::string str() const;
  /// Number of segments; equals the dimension of the polytope.
  std::size_t leaves() const;
  /// Vertices and facets written in closed form from the tree.
  Polytope polytope() const;
};

struct HannerCounts {
  Integer vertices;
  Integer facets;
  bool operator==(const HannerCounts&) const = default;
};

/// Vertices multiply under products and add under l1-sums; facets the other
/// way round.
HannerCounts hanner_counts(const HannerTree& tree);

/// Random binary tree with the given number of leaves and random node kinds.
HannerTree random_hanner_tree(std::size_t leaves, std::mt19937_64& rng);

}  // namespace mahler
