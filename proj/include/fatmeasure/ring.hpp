#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fatmeasure/box.hpp"
#include "fatmeasure/box_union.hpp"
#include "fatmeasure/cantor.hpp"

namespace fatmeasure {

/// Generator leaf (C^d + translation) intersected with `clip`. Clips are read
/// as half-open boxes and may have infinite sides (half-space clipping).
struct Generator {
  Point translation;
  Box clip;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Immutable expression tree denoting an element of the ring generated by
/// clipped Cantor translates. Copies share structure.
class RingExpr {
 public:
  enum class Kind { Gen, Union, Diff, Inter };

  static RingExpr gen(Point translation, Box clip);
  static RingExpr unite(RingExpr a, RingExpr b);
  static RingExpr difference(RingExpr a, RingExpr b);
  static RingExpr intersection(RingExpr a, RingExpr b);

  Kind kind() const;
  std::size_t dim() const;
  const Generator& generator() const;  // Gen only
  const RingExpr& left() const;        // internal nodes only
  const RingExpr& right() const;

  std::size_t leaf_count() const;
  bool has_difference() const;
  /// Gen leaves in left-to-right order.
  std::vector<Generator> leaves() const;

  friend bool operator==(const RingExpr& a, const RingExpr& b);

 private:
  struct Node;
  explicit RingExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static RingExpr binary(Kind kind, RingExpr a, RingExpr b);

  std::shared_ptr<const Node> node_;
};

/// Certified rational enclosure of the Lebesgue measure of a ring element.
struct MeasureBounds {
  Rational lower;
  Rational upper;
  unsigned stage = 0;
  std::size_t leaf_count = 0;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& v) const { return lower <= v && v <= upper; }
};

/// Stage-n approximation: every generator's C^d replaced by A_n^d, the
/// boolean tree evaluated exactly. With a window, only the part inside the
/// window is computed.
BoxUnion approx_set(const CantorSchedule& s, const RingExpr& e, unsigned n, const StageLimits& limits = {},
                    const std::optional<Box>& window = std::nullopt);

/// [max(0, lambda(S_n) - L delta_n), min(lambda(S_n) + L delta_n, lambda(P_n))]
/// where P_n is the set of points whose stage-n leaf pattern admits some
/// consistent limit pattern inside the expression. For expressions without
/// differences P_n = S_n, so the upper bound is the outer approximation.
MeasureBounds measure_bounds(const CantorSchedule& s, const RingExpr& e, unsigned n, const StageLimits& limits = {});

/// Deepens n = 1, 2, ... until the bounds are at most `tol` wide. Throws
/// BudgetError (partial: the best bounds) when the explosion cap is reached.
MeasureBounds premeasure(const CantorSchedule& s, const RingExpr& e, const Rational& tol, const StageLimits& limits = {});

/// Pushes the intersection with `box` down to the leaves.
RingExpr clip_to_box(const RingExpr& e, const Box& box);

struct RnEnumeration {
  std::vector<RingExpr> elements;
  std::vector<std::size_t> level_sizes;  // |R_1|, |R_2|, ...
  std::size_t merged = 0;                // candidates dropped as duplicates
  unsigned reference_stage = 4;
};

/// R_1 = pool, R_(k+1) = R_k plus all A u B and A \ B for A, B in R_k,
/// deduplicated by canonical stage approximation at the reference stage.
RnEnumeration generate_rn(const CantorSchedule& s, const std::vector<RingExpr>& pool, unsigned n,
                          std::size_t max_elements = 4096, unsigned reference_stage = 4,
                          const StageLimits& limits = {});

struct SplitReport {
  Box half_space;
  Box complement;
  unsigned stage = 0;
  Rational whole;
  Rational inside;
  Rational outside;
  bool equal = false;
};

/// True when `box` has exactly one finite bound.
bool is_half_space(const Box& box);
/// The closure-complement half-space of a half-space, as a half-open box.
Box complement_half_space(const Box& half_space);

SplitReport split_identity_check(const CantorSchedule& s, const RingExpr& e, const Box& half_space, unsigned n,
                                 const StageLimits& limits = {});

}  // namespace fatmeasure
