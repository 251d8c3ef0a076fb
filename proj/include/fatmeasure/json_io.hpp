#pragma once

#include <json.hpp>

#include "fatmeasure/box_union.hpp"
#include "fatmeasure/cantor.hpp"
#include "fatmeasure/cover.hpp"
#include "fatmeasure/extended_rational.hpp"
#include "fatmeasure/hausdorff.hpp"
#include "fatmeasure/packing.hpp"
#include "fatmeasure/ring.hpp"

/// JSON encodings. Every number is an exact string: rationals as "p/q",
/// infinite coordinates as "inf" / "-inf", Q[sqrt(r)] values as
/// {"a", "b", "sqrt"}. Decoders throw PreconditionError on malformed input.
namespace fatmeasure::json_io {

using nlohmann::json;

json encode(const Rational& v);
json encode(const Coord& c);
json encode(const Point& p);
json encode(const Box& b);
json encode(const BoxUnion& u);
json encode(const ExtendedRational& v);
json encode(const CantorSchedule& s);
json encode(const RingExpr& e);
json encode(const MeasureBounds& b);
json encode(const GapCertificate& c);
json encode(const UncoveredWitness& w);
json encode(const std::variant<UncoveredWitness, NeedsDeeperStage>& r);
json encode(const CoverCheck& c);
json encode(const CoverAttempt& a);
json encode(const PackingLayout& l);
json encode(const DeltaCover& c);
json encode(const DiamVolumeReport& r);
json encode(const Inequality& i);
json encode(const CorollaryReport& r);
json encode(const SplitReport& r);
json encode(const TileReport& r);
json encode(const Membership& m);

Rational decode_rational(const json& j);
Coord decode_coord(const json& j);
Point decode_point(const json& j);
Box decode_box(const json& j);
BoxUnion decode_box_union(const json& j);
ExtendedRational decode_extended(const json& j);
CantorSchedule decode_schedule(const json& j);
RingExpr decode_expr(const json& j);
std::vector<RingExpr> decode_expr_list(const json& j);
MeasureBounds decode_bounds(const json& j);
GapCertificate decode_gap(const json& j);
UncoveredWitness decode_witness(const json& j);
PackingLayout decode_layout(const json& j);
DeltaCover decode_delta_cover(const json& j);
Inequality decode_inequality(const json& j);

}  // namespace fatmeasure::json_io
