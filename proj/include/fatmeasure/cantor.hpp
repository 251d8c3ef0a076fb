#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fatmeasure/box.hpp"
#include "fatmeasure/box_union.hpp"
#include "fatmeasure/rational.hpp"

namespace fatmeasure {

/// Caps on materialized stage sets: a stage set may hold at most
/// 2^max_log2_boxes boxes.
struct StageLimits {
  unsigned max_log2_boxes = 20;
};

/// Closed interval [lo, hi] of a stage approximation.
struct ClosedInterval {
  Rational lo;
  Rational hi;
};

/// Symmetric fat Cantor set in [0,1]^d: the d-fold product of the 1-D set
/// obtained by removing, at stage k, an open middle interval of length
/// r_k = c * rho^k from every surviving interval.
///
/// All surviving intervals of a stage have the same length
///   l_n = 2^-n * (1 - sum_{k<=n} 2^(k-1) r_k),
/// and the right child of an interval [L, L + l_(k-1)] starts at
/// L + l_k + r_k. Endpoints are never removed by later stages: a removal
/// is an open middle interval of a surviving interval, so it misses both
/// of that interval's endpoints.
class CantorSchedule {
 public:
  /// Throws PreconditionError unless c > 0, rho > 0, 2 rho < 1 and
  /// c rho / (1 - 2 rho) < 1 (positive limit measure).
  CantorSchedule(unsigned dim, Rational c, Rational rho);
  static CantorSchedule standard(unsigned dim = 1) { return {dim, Rational(1), Rational(1, 4)}; }

  unsigned dim() const { return dim_; }
  const Rational& c() const { return c_; }
  const Rational& rho() const { return rho_; }

  /// r_k for k >= 1.
  Rational removal(unsigned k) const;
  /// l_n, common length of the 2^n surviving stage-n intervals.
  Rational interval_length(unsigned n) const;

  /// lambda_1(A_n) = 1 - sum_{k<=n} 2^(k-1) r_k in closed form.
  Rational stage_measure_1d(unsigned n) const;
  Rational stage_measure(unsigned n) const;
  Rational limit_measure_1d() const;
  /// (1 - c rho / (1 - 2 rho))^d.
  Rational limit_measure() const;
  /// lambda_d(A_n^d \ C^d) = lambda_1(A_n)^d - lambda_1(C)^d.
  Rational stage_defect(unsigned n) const;

  /// Stage-n intervals whose closure meets the open window (lo, hi), in
  /// increasing order. Pruned descent: cost is proportional to the output.
  std::vector<ClosedInterval> intervals_within(unsigned n, const Coord& lo, const Coord& hi) const;
  /// Stage-n left endpoints, all of them, in increasing order.
  std::vector<Rational> left_endpoints(unsigned n) const;

  /// lambda_1(A_n intersected with [lo, hi)); O(n) descent.
  Rational measure_within_1d(unsigned n, const Interval& window) const;

  /// A_n^d as a canonical half-open box union (closed endpoints dropped;
  /// they are null for the measure). Throws BudgetError past the cap.
  BoxUnion stage_approx(unsigned n, const StageLimits& limits = {}) const;
  /// A_n^d restricted to boxes meeting `window`, optionally dilating every
  /// interval [u, v] to [u, v + dilation) so that closed right endpoints are
  /// kept by the half-open carrier. Not clipped to the window.
  std::vector<Box> stage_boxes_within(unsigned n, const Box& window, const StageLimits& limits = {},
                                      const Rational& dilation = Rational(0)) const;

  friend bool operator==(const CantorSchedule&, const CantorSchedule&) = default;

 private:
  unsigned dim_;
  Rational c_;
  Rational rho_;
};

/// Three-valued answer of the budgeted membership test.
struct Membership {
  enum class Kind { In, Out, Unknown };
  Kind kind;
  /// In: stage at which the last coordinate became an endpoint.
  /// Out: stage of the gap that removed the point. Unknown: the cap.
  unsigned stage;
};

Membership membership(const CantorSchedule& s, std::span<const Rational> x, unsigned stage_cap);

/// Finite witness of nowhere density: an open box disjoint from A_m^d + t.
struct GapCertificate {
  unsigned stage = 0;
  Box witness;  // read as an open box
};

struct NeedsDeeperStage {
  unsigned deepest_stage_tried = 0;
};

/// Smallest stage m <= stage_cap at which the open box `j` contains a
/// sub-box missing A_m^d + t; the lexicographically first gap (coordinate,
/// then position) is returned, shrunk by a quarter of its width on both
/// sides. Throws PreconditionError when `j` is not solid.
std::variant<GapCertificate, NeedsDeeperStage> find_gap(const CantorSchedule& s, std::span<const Rational> t,
                                                        const Box& j, unsigned stage_cap);

/// Smallest stage m <= stage_cap at which the open box is disjoint from
/// A_m^d + t, if any.
std::optional<unsigned> disjoint_stage(const CantorSchedule& s, std::span<const Rational> t, const Box& open_box,
                                       unsigned stage_cap);

/// Independent check of a certificate with box algebra: witness (as a
/// half-open box) intersected with stage_boxes(m) + t is empty. For
/// nondegenerate boxes the half-open and open/closed readings agree on
/// disjointness.
bool verify_gap(const CantorSchedule& s, std::span<const Rational> t, const GapCertificate& cert);

}  // namespace fatmeasure
