#include "fatmeasure/json_io.hpp"

#include "fatmeasure/errors.hpp"

namespace fatmeasure::json_io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t index_of(const json& j) {
  if (!j.is_number_unsigned()) throw PreconditionError("expected a non-negative integer");
  return j.get<std::size_t>();
}

template <class T, class F>
json encode_all(const std::vector<T>& xs, F f) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

}  // namespace

json encode(const Rational& v) { return to_string(v); }

json encode(const Coord& c) {
  if (c.infinity() > 0) return "inf";
  if (c.infinity() < 0) return "-inf";
  return to_string(c.value());
}

json encode(const Point& p) {
  return encode_all(p, [](const Rational& v) { return encode(v); });
}

json encode(const Box& b) {
  json lo = json::array(), hi = json::array();
  for (const auto& side : b.sides()) {
    lo.push_back(encode(side.lo));
    hi.push_back(encode(side.hi));
  }
  return {{"lo", lo}, {"hi", hi}};
}

json encode(const BoxUnion& u) {
  return {{"dim", u.dim()}, {"boxes", encode_all(u.boxes(), [](const Box& b) { return encode(b); })}};
}

json encode(const ExtendedRational& v) {
  return {{"a", to_string(v.rational_part())}, {"b", to_string(v.surd_part())}, {"sqrt", v.radicand()}};
}

json encode(const CantorSchedule& s) { return {{"d", s.dim()}, {"c", encode(s.c())}, {"rho", encode(s.rho())}}; }

json encode(const RingExpr& e) {
  switch (e.kind()) {
    case RingExpr::Kind::Gen:
      return {{"gen", {{"x", encode(e.generator().translation)}, {"clip", encode(e.generator().clip)}}}};
    case RingExpr::Kind::Union:
      return {{"union", {encode(e.left()), encode(e.right())}}};
    case RingExpr::Kind::Diff:
      return {{"diff", {encode(e.left()), encode(e.right())}}};
    case RingExpr::Kind::Inter:
      return {{"inter", {encode(e.left()), encode(e.right())}}};
  }
  throw std::logic_error("unreachable");
}

json encode(const MeasureBounds& b) {
  return {{"lower", encode(b.lower)}, {"upper", encode(b.upper)}, {"stage", b.stage}, {"leaf_count", b.leaf_count}};
}

json encode(const GapCertificate& c) { return {{"stage", c.stage}, {"box", encode(c.witness)}}; }

json encode(const UncoveredWitness& w) {
  json certs = json::array();
  for (const auto& c : w.certificates) {
    json entry{{"element", c.element}, {"leaf", c.leaf}, {"x", encode(c.translation)}, {"clip_disjoint", c.clip_disjoint}};
    if (!c.clip_disjoint) entry["certificate"] = encode(c.gap);
    certs.push_back(std::move(entry));
  }
  return {{"box", encode(w.box)}, {"stage", w.stage}, {"certificates", certs}};
}

json encode(const std::variant<UncoveredWitness, NeedsDeeperStage>& r) {
  if (const auto* w = std::get_if<UncoveredWitness>(&r)) return {{"witness", encode(*w)}};
  return {{"needs_deeper_stage", std::get<NeedsDeeperStage>(r).deepest_stage_tried}};
}

json encode(const CoverCheck& c) {
  return {{"stage", c.stage},
          {"covers_outer_hulls", c.covers_outer_hulls},
          {"genuine", c.genuine},
          {"uncovered_measure", encode(c.uncovered_measure)}};
}

json encode(const CoverAttempt& a) {
  json out;
  if (const auto* b = std::get_if<Box>(&a.target)) {
    out["target"] = {{"box", encode(*b)}};
  } else {
    out["target"] = {{"expr", encode(std::get<RingExpr>(a.target))}};
  }
  out["indices"] = a.indices;
  out["elements"] = encode_all(a.elements, [](const RingExpr& e) { return encode(e); });
  out["stage"] = a.stage;
  out["total_premeasure_upper"] = a.total_premeasure_upper ? encode(*a.total_premeasure_upper) : json("infinite");
  out["verified"] = a.verified;
  out["subsets_checked"] = a.subsets_checked;
  out["exhaustive_complete"] = a.exhaustive_complete;
  if (a.witness) out["witness"] = encode(*a.witness);
  return out;
}

json encode(const PackingLayout& l) {
  json placements = json::array();
  for (const auto& p : l.placements) placements.push_back({{"j", p.j}, {"t", encode(p.translation)}});
  json tree = json::array();
  for (const auto& st : l.merge_tree) {
    tree.push_back({{"level", st.level},
                    {"parts", st.parts},
                    {"result", st.result},
                    {"offsets", encode_all(st.offsets, [](const Point& p) { return encode(p); })}});
  }
  return {{"placements", placements},  {"target", encode(l.target)},       {"merge_tree", tree},
          {"selected", l.selected},    {"scale", encode(l.scale)},         {"scaled_volume", encode(l.scaled_volume)},
          {"verified", l.verified}};
}

json encode(const DeltaCover& c) {
  json cubes = json::array();
  for (const auto& q : c.cubes) cubes.push_back({{"corner", encode(q.corner)}, {"side", encode(q.side)}});
  return {{"dim", c.dim},         {"delta", encode(c.delta)},         {"stage", c.stage},
          {"cube_count", c.cubes.size()}, {"diameter", encode(c.diameter)}, {"gauge_sum", encode(c.gauge_sum)},
          {"cubes", cubes}};
}

json encode(const DiamVolumeReport& r) {
  return {{"measure", encode(r.measure)},
          {"diameter_squared", encode(r.diameter_squared)},
          {"measure_squared", encode(r.measure_squared)},
          {"diameter_squared_pow_d", encode(r.diameter_squared_pow_d)},
          {"holds", r.holds}};
}

json encode(const Inequality& i) {
  return {{"name", i.name},   {"lhs", encode(i.lhs)},   {"relation", i.relation},
          {"rhs", encode(i.rhs)}, {"holds", i.holds}, {"informational", i.informational}};
}

json encode(const CorollaryReport& r) {
  return {{"dim", r.dim},
          {"gauge_exponent", r.gauge.s},
          {"delta", encode(r.delta)},
          {"a", encode(r.a)},
          {"ball_constant", encode(r.ball_constant)},
          {"cover", encode(r.cover)},
          {"truncation", r.truncation},
          {"cube_side", r.cubes.empty() ? json(nullptr) : encode(r.cubes.front().side)},
          {"alpha", encode(r.alpha)},
          {"alpha_exact", r.alpha_exact},
          {"packing", encode(r.packing)},
          {"inequalities", encode_all(r.inequalities, [](const Inequality& i) { return encode(i); })},
          {"ok", r.ok}};
}

json encode(const SplitReport& r) {
  return {{"half_space", encode(r.half_space)},
          {"complement", encode(r.complement)},
          {"stage", r.stage},
          {"whole", encode(r.whole)},
          {"inside", encode(r.inside)},
          {"outside", encode(r.outside)},
          {"equal", r.equal}};
}

json encode(const TileReport& r) {
  return {{"base", encode(r.base)},
          {"q", encode(r.q)},
          {"scaled", encode(r.scaled)},
          {"refinement", encode(r.refinement)},
          {"scaled_count", r.scaled_count},
          {"base_count", r.base_count},
          {"scaled_measure", encode(r.scaled_measure)},
          {"counted_measure", encode(r.counted_measure)},
          {"base_measure", encode(r.base_measure)},
          {"base_counted_measure", encode(r.base_counted_measure)},
          {"tiling_exact", r.tiling_exact},
          {"ok", r.ok}};
}

json encode(const Membership& m) {
  const char* kind = m.kind == Membership::Kind::In ? "in" : m.kind == Membership::Kind::Out ? "out" : "unknown";
  return {{"kind", kind}, {"stage", m.stage}};
}

// ---------------------------------------------------------------------------

Rational decode_rational(const json& j) {
  if (!j.is_string()) throw PreconditionError("expected a rational string");
  return parse_rational(j.get<std::string>());
}

Coord decode_coord(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return Coord::pos_inf();
    if (s == "-inf") return Coord::neg_inf();
  }
  return Coord(decode_rational(j));
}

Point decode_point(const json& j) {
  if (!j.is_array()) throw PreconditionError("expected an array of rationals");
  Point p;
  for (const auto& v : j) p.push_back(decode_rational(v));
  return p;
}

Box decode_box(const json& j) {
  const json& lo = field(j, "lo");
  const json& hi = field(j, "hi");
  if (!lo.is_array() || !hi.is_array() || lo.size() != hi.size()) throw PreconditionError("box lo/hi mismatch");
  std::vector<Interval> sides;
  for (std::size_t i = 0; i < lo.size(); ++i) sides.push_back({decode_coord(lo[i]), decode_coord(hi[i])});
  return Box(std::move(sides));
}

BoxUnion decode_box_union(const json& j) {
  std::size_t dim = index_of(field(j, "dim"));
  std::vector<Box> boxes;
  for (const auto& b : field(j, "boxes")) boxes.push_back(decode_box(b));
  for (const auto& b : boxes) {
    if (b.dim() != dim) throw PreconditionError("box dimension differs from the union");
  }
  return BoxUnion(dim, boxes);
}

ExtendedRational decode_extended(const json& j) {
  const json& r = field(j, "sqrt");
  if (!r.is_number_unsigned()) throw PreconditionError("sqrt must be a positive integer");
  return {decode_rational(field(j, "a")), decode_rational(field(j, "b")), r.get<unsigned long>()};
}

CantorSchedule decode_schedule(const json& j) {
  return {static_cast<unsigned>(index_of(field(j, "d"))), decode_rational(field(j, "c")),
          decode_rational(field(j, "rho"))};
}

RingExpr decode_expr(const json& j) {
  if (!j.is_object() || j.size() != 1) throw PreconditionError("expression must be an object with one key");
  const auto& [key, value] = *j.items().begin();
  if (key == "gen") {
    Point x = decode_point(field(value, "x"));
    Box clip = decode_box(field(value, "clip"));
    return RingExpr::gen(std::move(x), std::move(clip));
  }
  if (!value.is_array() || value.size() != 2) throw PreconditionError("'" + key + "' takes two operands");
  RingExpr a = decode_expr(value[0]);
  RingExpr b = decode_expr(value[1]);
  if (key == "union") return RingExpr::unite(a, b);
  if (key == "diff") return RingExpr::difference(a, b);
  if (key == "inter") return RingExpr::intersection(a, b);
  throw PreconditionError("unknown expression node '" + key + "'");
}

std::vector<RingExpr> decode_expr_list(const json& j) {
  if (!j.is_array()) throw PreconditionError("expected an array of expressions");
  std::vector<RingExpr> out;
  for (const auto& e : j) out.push_back(decode_expr(e));
  return out;
}

MeasureBounds decode_bounds(const json& j) {
  MeasureBounds b;
  b.lower = decode_rational(field(j, "lower"));
  b.upper = decode_rational(field(j, "upper"));
  b.stage = static_cast<unsigned>(index_of(field(j, "stage")));
  b.leaf_count = index_of(field(j, "leaf_count"));
  return b;
}

GapCertificate decode_gap(const json& j) {
  return {static_cast<unsigned>(index_of(field(j, "stage"))), decode_box(field(j, "box"))};
}

UncoveredWitness decode_witness(const json& j) {
  UncoveredWitness w;
  w.box = decode_box(field(j, "box"));
  w.stage = static_cast<unsigned>(index_of(field(j, "stage")));
  for (const auto& c : field(j, "certificates")) {
    LeafCertificate lc;
    lc.element = index_of(field(c, "element"));
    lc.leaf = index_of(field(c, "leaf"));
    lc.translation = decode_point(field(c, "x"));
    const json& flag = field(c, "clip_disjoint");
    if (!flag.is_boolean()) throw PreconditionError("clip_disjoint must be a boolean");
    lc.clip_disjoint = flag.get<bool>();
    if (!lc.clip_disjoint) lc.gap = decode_gap(field(c, "certificate"));
    w.certificates.push_back(std::move(lc));
  }
  return w;
}

PackingLayout decode_layout(const json& j) {
  PackingLayout l;
  for (const auto& p : field(j, "placements")) l.placements.push_back({index_of(field(p, "j")), decode_point(field(p, "t"))});
  l.target = decode_box(field(j, "target"));
  for (const auto& st : field(j, "merge_tree")) {
    MergeStep m;
    m.level = field(st, "level").get<long>();
    m.parts = field(st, "parts").get<std::vector<std::size_t>>();
    m.result = index_of(field(st, "result"));
    for (const auto& o : field(st, "offsets")) m.offsets.push_back(decode_point(o));
    l.merge_tree.push_back(std::move(m));
  }
  l.selected = index_of(field(j, "selected"));
  l.scale = decode_rational(field(j, "scale"));
  l.scaled_volume = decode_rational(field(j, "scaled_volume"));
  l.verified = field(j, "verified").get<bool>();
  return l;
}

DeltaCover decode_delta_cover(const json& j) {
  DeltaCover c;
  c.dim = index_of(field(j, "dim"));
  c.delta = decode_rational(field(j, "delta"));
  c.stage = static_cast<unsigned>(index_of(field(j, "stage")));
  c.diameter = decode_extended(field(j, "diameter"));
  c.gauge_sum = decode_extended(field(j, "gauge_sum"));
  for (const auto& q : field(j, "cubes")) c.cubes.push_back({decode_point(field(q, "corner")), decode_rational(field(q, "side"))});
  return c;
}

Inequality decode_inequality(const json& j) {
  Inequality i;
  i.name = field(j, "name").get<std::string>();
  i.lhs = decode_extended(field(j, "lhs"));
  i.relation = field(j, "relation").get<std::string>();
  i.rhs = decode_extended(field(j, "rhs"));
  i.holds = field(j, "holds").get<bool>();
  i.informational = field(j, "informational").get<bool>();
  return i;
}

}  // namespace fatmeasure::json_io
