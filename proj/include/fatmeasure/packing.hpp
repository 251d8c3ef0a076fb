#pragma once

#include <cstddef>
#include <vector>

#include "fatmeasure/box.hpp"
#include "fatmeasure/rational.hpp"

namespace fatmeasure {

/// Cubes [0, a_j]^d given by their sides.
struct CubeFamily {
  std::size_t dim = 1;
  std::vector<Rational> sides;

  Rational total_volume() const;
};

struct DyadicSide {
  long k = 0;
  Rational value;  // 2^k <= side < 2^(k+1)
};

struct RoundingReport {
  std::vector<DyadicSide> rounded;
  Rational rounded_volume;
  Rational input_volume;
  bool volume_bound = false;  // rounded_volume >= 2^-d * input_volume
};

RoundingReport round_to_dyadic(const std::vector<Rational>& sides, std::size_t dim);

struct MergeStep {
  long level = 0;                 // k of the constituents, side 2^k
  std::vector<std::size_t> parts;  // 2^d cube ids in sub-cube order
  std::size_t result = 0;
  std::vector<Point> offsets;  // of each part inside the result
};

/// A cube of the merged family. Ids below the input count are inputs.
struct DyadicCube {
  std::size_t id = 0;
  long k = 0;
};

struct MergeResult {
  std::vector<DyadicCube> final_family;  // increasing id
  std::vector<MergeStep> tree;
  Rational volume;  // sum of 2^(k d) over the final family
};

/// Repeatedly merges the 2^d lowest-id cubes of the smallest level that has
/// at least 2^d of them. Sub-cube b sits at offset bit (d-1-i) of b times
/// 2^k in coordinate i.
MergeResult merge_dyadic(const std::vector<long>& levels, std::size_t dim);

struct Placement {
  std::size_t j = 0;
  Point translation;
};

struct PackingLayout {
  std::vector<Placement> placements;
  Box target;
  std::vector<MergeStep> merge_tree;
  std::size_t selected = 0;  // id of the merged cube unfolded at the origin
  Rational scale;
  Rational scaled_volume;  // sum of (a_j / alpha)^d
  bool verified = false;
};

/// Covers [0, alpha * target_side)^d with translates of the input cubes.
/// Requires sum (a_j / alpha)^d >= 1; a merged cube of side at least
/// target_side (in units of alpha) then exists when target_side <= 1/2.
PackingLayout pack_cover(const CubeFamily& family, const Rational& target_side = Rational(1, 2),
                         const Rational& alpha = Rational(1));

/// Recomputes coverage and legality of a layout from scratch.
bool verify_layout(const CubeFamily& family, const PackingLayout& layout);

}  // namespace fatmeasure
