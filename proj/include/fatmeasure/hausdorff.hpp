#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fatmeasure/box_union.hpp"
#include "fatmeasure/cantor.hpp"
#include "fatmeasure/extended_rational.hpp"
#include "fatmeasure/packing.hpp"
#include "fatmeasure/ring.hpp"

namespace fatmeasure {

/// h(t) = t^s.
struct Gauge {
  unsigned s = 1;

  ExtendedRational operator()(const ExtendedRational& t) const { return t.pow(s); }
};

struct Cube {
  Point corner;
  Rational side;

  friend bool operator==(const Cube&, const Cube&) = default;
};

/// side * sqrt(d)
ExtendedRational cube_diameter(const Rational& side, std::size_t dim);

/// Cover by equal cubes. Gauge sums are upper bounds for nu_delta*; no lower
/// bound is claimed anywhere.
struct DeltaCover {
  std::size_t dim = 1;
  std::vector<Cube> cubes;
  Rational delta;
  unsigned stage = 0;       // Cantor stage or dyadic refinement level
  ExtendedRational diameter;  // of every cube
  ExtendedRational gauge_sum;
};

enum class StageChoice {
  Minimal,  // first stage whose cubes are below delta
  Best,     // smallest gauge sum among admissible stages within the cap and the cube limit
};

struct NuOptions {
  unsigned stage_cap = 20;
  std::optional<unsigned> stage;  // explicit stage; must be admissible
  StageChoice choice = StageChoice::Minimal;
  StageLimits limits = {};
};

/// Cover of C^d by the stage-n cubes.
DeltaCover nu_delta_upper(const CantorSchedule& s, const Gauge& h, const Rational& delta, const NuOptions& options = {});
/// Cover of a bounded box union by cubes of side g / 2^j, g the gcd of all
/// coordinates, j minimal with diameter below delta.
DeltaCover nu_delta_upper(const BoxUnion& u, const Gauge& h, const Rational& delta, const NuOptions& options = {});

struct DiamVolumeReport {
  Rational measure;
  Rational diameter_squared;
  /// measure <= diam^d, compared as measure^2 <= (diam^2)^d
  Rational measure_squared;
  Rational diameter_squared_pow_d;
  bool holds = false;
};

DiamVolumeReport diam_volume_check(const BoxUnion& u);

struct Inequality {
  std::string name;
  ExtendedRational lhs;
  std::string relation;  // "<", "<=" or "=="
  ExtendedRational rhs;
  bool holds = false;
  bool informational = false;  // reported, not part of the chain
};

Inequality compare(std::string name, const ExtendedRational& lhs, std::string relation, const ExtendedRational& rhs);

struct CorollaryReport {
  std::size_t dim = 1;
  Gauge gauge;
  Rational delta;
  Rational a;
  Rational ball_constant;  // C_d, 1 for the enclosing-cube bound
  DeltaCover cover;
  std::size_t truncation = 0;  // cubes E_1..E_n kept
  std::vector<Cube> cubes;     // Q_j = [0, diam E_j / sqrt(d)]^d
  Rational alpha;
  bool alpha_exact = false;  // otherwise a dyadic lower bound
  PackingLayout packing;
  std::vector<Inequality> inequalities;
  bool ok = false;
};

/// Cover K = C^d, equal-diameter cubes, packing into [0, alpha/2]^d, gauge
/// bound; each comparison is recorded with both exact sides.
CorollaryReport corollary_pipeline(const CantorSchedule& s, const Gauge& h, const Rational& delta, const Rational& a,
                                   const NuOptions& options = {});

/// Smallest n with stage_defect(n) <= tol.
unsigned tolerance_stage(const CantorSchedule& s, const Rational& tol, unsigned stage_cap = 60);

/// Bounds for lambda(C^d intersected with {first coordinate <= x}) at the
/// tolerance stage; both bounds are nondecreasing in x.
MeasureBounds range_function(const CantorSchedule& s, const Rational& x, const Rational& tol,
                             unsigned stage_cap = 60);

struct LevelSolution {
  Rational x;
  MeasureBounds bounds;
  unsigned iterations = 0;
};

/// Bisection on x until range_function(x) brackets the target.
LevelSolution solve_level(const CantorSchedule& s, const Rational& target, const Rational& tol,
                          unsigned stage_cap = 60);

}  // namespace fatmeasure
