#pragma once

#include <unordered_map>
#include <vector>

#include "fatmeasure/ring.hpp"

namespace fatmeasure {

/// Compiles ring expressions over a shared table of Cantor translates
/// ("variables") and exact boxes, then evaluates predicates over the cells
/// of the stage-n arrangement in one sweep.
///
/// A point's mask has bit v set when it lies in A_n^d + x_v, and bit V + c
/// when it lies in exact box c. The limit pattern beta of the variables at a
/// point satisfies beta <= alpha (C^d sits inside A_n^d), which is what the
/// "possible" predicates quantify over.
class CellSystem {
 public:
  struct Formula {
    struct Node {
      RingExpr::Kind kind;
      int left = -1;
      int right = -1;
      int var = -1;
      int box = -1;
    };
    std::vector<Node> nodes;
    int root = -1;
  };

  CellSystem(const CantorSchedule& s, StageLimits limits) : schedule_(s), limits_(limits) {}

  Formula compile(const RingExpr& e);
  /// Registers an exact box operand; returns its box index.
  int add_box(const Box& b);

  std::size_t var_count() const { return vars_.size(); }
  std::size_t box_count() const { return boxes_.size(); }

  /// Truth of a formula for variable bits `vars` and exact box bits `boxes`.
  bool eval(const Formula& f, Mask vars, Mask boxes) const;

  /// Canonical union of the cells whose (var bits, box bits) satisfy `keep`.
  /// `dilation` > 0 widens every stage interval to keep closed endpoints.
  BoxUnion evaluate(unsigned n, const std::function<bool(Mask vars, Mask boxes)>& keep,
                    const std::optional<Box>& window = std::nullopt, const Rational& dilation = Rational(0)) const;

  /// Does some beta <= vars (bitwise) make `pred(beta)` true?
  static bool exists_below(Mask vars, const std::function<bool(Mask)>& pred);

 private:
  int var_index(const Point& x);
  int compile_node(const RingExpr& e, Formula& f);

  const CantorSchedule& schedule_;
  StageLimits limits_;
  std::vector<Point> vars_;
  std::vector<std::vector<int>> var_boxes_;  // boxes that appear alongside each variable
  std::vector<Box> boxes_;
};

}  // namespace fatmeasure
