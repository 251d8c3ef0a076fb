#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fatmeasure/box.hpp"

namespace fatmeasure {

/// Membership pattern of a point across the operands of a sweep: bit i is
/// set when the point lies in operand i.
using Mask = std::uint64_t;
using MaskPredicate = std::function<bool(Mask)>;

/// Finite union of pairwise-disjoint half-open boxes in canonical form.
///
/// The canonical form is the recursive slab decomposition: along axis 0 the
/// set is cut at every breakpoint, each slab carries the canonical form of
/// its (d-1)-dimensional cross-section, and adjacent slabs with identical
/// cross-sections are merged. Equal sets therefore have identical box lists,
/// and the list is lexicographically ordered by lower corner.
class BoxUnion {
 public:
  explicit BoxUnion(std::size_t dim = 1) : dim_(dim) {}
  /// Canonicalizes an arbitrary (possibly overlapping) list of boxes.
  BoxUnion(std::size_t dim, std::span<const Box> boxes);
  explicit BoxUnion(const Box& box);

  /// Wraps a list the caller guarantees is already canonical. Used for
  /// product stage sets, whose canonical form is known in closed form.
  static BoxUnion from_canonical(std::size_t dim, std::vector<Box> boxes);

  std::size_t dim() const { return dim_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  std::size_t size() const { return boxes_.size(); }

  /// Sum of box volumes. Throws PreconditionError("unbounded") if any box is.
  Rational measure() const;
  bool bounded() const;

  BoxUnion unite(const BoxUnion& other) const;
  BoxUnion intersect(const BoxUnion& other) const;
  BoxUnion subtract(const BoxUnion& other) const;
  BoxUnion intersect(const Box& box) const;
  BoxUnion translate(std::span<const Rational> shift) const;

  bool contains(std::span<const Rational> point) const;
  bool includes(const BoxUnion& other) const { return other.subtract(*this).empty(); }
  bool pairwise_disjoint() const;
  /// Smallest box containing the union; empty box of the right dimension if empty.
  Box bounding_box() const;

  friend bool operator==(const BoxUnion&, const BoxUnion&) = default;

 private:
  std::size_t dim_;
  std::vector<Box> boxes_;
};

/// Evaluates an arbitrary boolean function of up to 64 box-list operands in a
/// single sweep. The result is the canonical union of all points whose
/// membership mask satisfies `keep`. `keep(0)` must be false.
BoxUnion combine(std::size_t dim, std::span<const std::span<const Box>> operands, const MaskPredicate& keep);

/// Result of checking that the box [lo, lo + q .* (hi - lo)) is tiled by
/// translates of a common refinement of `base`.
struct TileReport {
  Box base;
  std::vector<Rational> q;
  Box scaled;                       // I_q
  Box refinement;                   // common refinement cell
  std::size_t scaled_count = 0;     // translates tiling I_q
  std::size_t base_count = 0;       // translates tiling the base box
  Rational scaled_measure;          // lambda(I_q)
  Rational counted_measure;         // scaled_count * lambda(refinement)
  Rational base_measure;
  Rational base_counted_measure;
  bool tiling_exact = false;        // union of translates == I_q and disjoint
  bool ok = false;
};

TileReport tile_check(const Box& base, const std::vector<Rational>& q, std::size_t max_tiles = 1u << 16);

}  // namespace fatmeasure
