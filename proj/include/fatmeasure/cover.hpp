#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "fatmeasure/ring.hpp"

namespace fatmeasure {

/// Drops the subtrahend of every difference and the right operand of every
/// intersection. The result has only Gen and Union nodes and contains `e`.
RingExpr positive_hull(const RingExpr& e);

struct CoverCheck {
  unsigned stage = 0;
  /// target is inside the union of the stage-n outer hulls of the elements
  bool covers_outer_hulls = false;
  /// the cover holds for the real sets, whatever the limit membership of
  /// each point turns out to be
  bool genuine = false;
  Rational uncovered_measure;  // lambda(target minus the outer hulls)
};

/// Box-union target. An exact region with interior can never be covered
/// genuinely by sets with empty interior, so `genuine` holds only for an
/// empty target.
CoverCheck verify_cover(const CantorSchedule& s, const BoxUnion& target, const std::vector<RingExpr>& elements,
                        unsigned stage, const StageLimits& limits = {});
/// Ring-expression target: compares stage approximations and checks the
/// cover cell by cell over all limit patterns consistent with stage n.
CoverCheck verify_cover(const CantorSchedule& s, const RingExpr& target, const std::vector<RingExpr>& elements,
                        unsigned stage, const StageLimits& limits = {});

/// Which translate a certificate refers to.
struct LeafCertificate {
  std::size_t element = 0;
  std::size_t leaf = 0;
  Point translation;
  /// set when the leaf's clip misses the witness; `gap` is then unused
  bool clip_disjoint = false;
  GapCertificate gap;
};

struct UncoveredWitness {
  Box box;  // open reading, positive sides
  unsigned stage = 0;
  std::vector<LeafCertificate> certificates;
};

struct SearchLimits {
  unsigned stage_cap = 12;
  /// search nodes per stage for the coordinate assignment in d >= 2
  std::size_t node_budget = std::size_t{1} << 18;
};

/// Open box inside the target's interior that misses every Cantor translate
/// of every element's positive hull. All leaves are avoided jointly at the
/// smallest sufficient stage; the first admissible component is shrunk by a
/// quarter of its width on each side.
std::variant<UncoveredWitness, NeedsDeeperStage> find_uncovered_box(const CantorSchedule& s, const Box& target,
                                                                    const std::vector<RingExpr>& elements,
                                                                    const SearchLimits& search = {});

/// Independent check: every certificate verifies, the witness sits in the
/// target's interior, and the witness is disjoint from the stage
/// approximation of every element's positive hull.
bool verify_witness(const CantorSchedule& s, const Box& target, const std::vector<RingExpr>& elements,
                    const UncoveredWitness& w, const StageLimits& limits = {});

struct CoverOptions {
  unsigned stage = 6;
  std::size_t budget = 4096;  // subset verifications in the exhaustive phase
  bool clip_to_target = false;
};

struct CoverAttempt {
  std::variant<Box, RingExpr> target;
  std::vector<std::size_t> indices;  // pool indices used
  std::vector<RingExpr> elements;
  unsigned stage = 0;
  /// empty means no verified cover was found: the infinite marker
  std::optional<Rational> total_premeasure_upper;
  bool verified = false;
  std::size_t subsets_checked = 0;
  bool exhaustive_complete = false;
  /// box targets: certificate that no sub-family of the pool covers
  std::optional<UncoveredWitness> witness;

  bool infinite() const { return !total_premeasure_upper.has_value(); }
};

/// Greedy, then exhaustive up to the budget, search for a verified cover of
/// minimal summed upper premeasure; ties go to the lexicographically
/// smallest index set.
CoverAttempt outer_upper(const CantorSchedule& s, const std::variant<Box, RingExpr>& target,
                         const std::vector<RingExpr>& pool, const CoverOptions& options = {},
                         const StageLimits& limits = {}, const SearchLimits& search = {});

/// Clipped grid translates: element k is C^d + x_k clipped to [0,1]^d with
/// x_k(i) = ((k * (2i + 1)) mod 16) / 16.
std::vector<RingExpr> grid_pool(std::size_t dim, std::size_t size);

struct CubeReportRow {
  std::vector<std::size_t> subset;
  std::variant<UncoveredWitness, NeedsDeeperStage> outcome;
  bool verified = false;
};

struct CubeReport {
  std::size_t dim = 0;
  std::vector<RingExpr> pool;
  std::vector<CubeReportRow> rows;
  std::size_t witnesses = 0;
  std::size_t inconclusive = 0;
};

/// Every nonempty subset of the pool (the empty family when the pool is
/// empty) must leave part of [0,1]^d uncovered.
CubeReport infinite_cube_report(const CantorSchedule& s, std::size_t pool_size, const SearchLimits& search = {},
                                std::size_t max_subsets = std::size_t{1} << 16);

}  // namespace fatmeasure
