#include "fatmeasure/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "fatmeasure/errors.hpp"
#include "fatmeasure/json_io.hpp"

namespace fatmeasure::cli {

using nlohmann::json;
using namespace fatmeasure::json_io;

namespace {

struct Options {
  // global
  unsigned d = 1;
  std::string c = "1/1";
  std::string rho = "1/4";
  unsigned stage_cap = 12;
  std::size_t budget = 4096;
  std::string tol = "1/1024";
  std::uint64_t seed = 0;
  std::string out;
  std::string verify;

  // per command
  std::optional<unsigned> stage;
  std::vector<std::string> point;
  std::string expr;
  std::string expr_file;
  std::string pool;
  std::string pool_file;
  std::optional<std::size_t> grid_pool;
  unsigned axis = 0;
  std::string at = "1/2";
  std::string keep = "below";
  unsigned n = 2;
  unsigned reference_stage = 4;
  std::vector<std::string> lo;
  std::vector<std::string> hi;
  bool clip_to_target = false;
  std::size_t pool_size = 4;
  std::vector<std::string> sides;
  std::string alpha = "1";
  std::string target_side = "1/2";
  unsigned gauge = 1;
  std::string delta;
  bool best = false;
  std::string union_json;
  std::string a;
  std::string target;
  std::string x;
  std::vector<std::string> q;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw PreconditionError("malformed JSON in " + what + ": " + e.what());
  }
}

Rational rational_flag(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const PreconditionError&) {
    throw PreconditionError(std::string("--") + name + ": malformed rational '" + text + "'");
  }
}

std::vector<Rational> rational_list(const std::vector<std::string>& items) {
  std::vector<Rational> out;
  for (const auto& item : items) {
    for (const auto& v : parse_rational_list(item)) out.push_back(v);
  }
  return out;
}

json config_json(const Options& o) {
  return {{"d", o.d},
          {"c", encode(parse_rational(o.c))},
          {"rho", encode(parse_rational(o.rho))},
          {"stage_cap", o.stage_cap},
          {"budget", o.budget},
          {"tol", encode(parse_rational(o.tol))},
          {"seed", o.seed}};
}

CantorSchedule schedule_of(const json& config) {
  return {config.at("d").get<unsigned>(), decode_rational(config.at("c")), decode_rational(config.at("rho"))};
}

std::optional<json> expr_input(const Options& o) {
  if (!o.expr.empty()) return parse_json(o.expr, "--expr");
  if (!o.expr_file.empty()) return parse_json(read_file(o.expr_file), o.expr_file);
  return std::nullopt;
}

json require_expr(const Options& o) {
  auto e = expr_input(o);
  if (!e) throw PreconditionError("an expression is required (--expr or --expr-file)");
  decode_expr(*e);  // validate early
  return encode(decode_expr(*e));
}

// Pool as a JSON array of expressions; the grid pool is expanded.
json pool_input(const Options& o, std::size_t dim) {
  std::vector<RingExpr> pool;
  if (!o.pool.empty()) pool = decode_expr_list(parse_json(o.pool, "--pool"));
  if (!o.pool_file.empty()) pool = decode_expr_list(parse_json(read_file(o.pool_file), o.pool_file));
  if (o.grid_pool) pool = grid_pool(dim, *o.grid_pool);
  json out = json::array();
  for (const auto& e : pool) out.push_back(encode(e));
  return out;
}

json box_input(const Options& o, std::size_t dim) {
  if (o.lo.empty() && o.hi.empty()) return encode(Box::unit(dim));
  Point lo = rational_list(o.lo), hi = rational_list(o.hi);
  if (lo.size() != dim || hi.size() != dim) throw PreconditionError("--lo and --hi need one value per dimension");
  return encode(Box(lo, hi));
}


json optional_stage(const std::optional<unsigned>& s) { return s ? json(*s) : json(nullptr); }

// ---------------------------------------------------------------------------
// Commands: each builds "inputs" from flags, then "result" from config and
// inputs only, so that a replay can recompute the same values.

json compute(const std::string& command, const json& config, const json& inputs);

json inputs_for(const std::string& command, const Options& o) {
  const std::size_t dim = o.d;
  if (command == "cantor-info") {
    json in{{"stage", o.stage.value_or(3)}};
    if (!o.point.empty()) in["point"] = encode(rational_list(o.point));
    return in;
  }
  if (command == "measure") return {{"expr", require_expr(o)}, {"stage", optional_stage(o.stage)}};
  if (command == "split-check") {
    if (o.keep != "below" && o.keep != "above") throw PreconditionError("--keep must be 'below' or 'above'");
    return {{"expr", require_expr(o)},
            {"axis", o.axis},
            {"at", encode(rational_flag(o.at, "at"))},
            {"keep", o.keep},
            {"stage", o.stage.value_or(4)}};
  }
  if (command == "rn-enumerate") {
    return {{"pool", pool_input(o, dim)}, {"n", o.n}, {"reference_stage", o.reference_stage}};
  }
  if (command == "cover-search") {
    json in{{"pool", pool_input(o, dim)}, {"stage", o.stage.value_or(6)}, {"clip_to_target", o.clip_to_target}};
    if (auto e = expr_input(o)) {
      in["target"] = {{"expr", encode(decode_expr(*e))}};
    } else {
      in["target"] = {{"box", box_input(o, dim)}};
    }
    return in;
  }
  if (command == "uncovered-box") return {{"target", box_input(o, dim)}, {"pool", pool_input(o, dim)}};
  if (command == "infinite-cube") return {{"pool_size", o.pool_size}};
  if (command == "pack") {
    return {{"sides", encode(rational_list(o.sides))},
            {"alpha", encode(rational_flag(o.alpha, "alpha"))},
            {"target_side", encode(rational_flag(o.target_side, "target-side"))}};
  }
  if (command == "hausdorff-bound") {
    json in{{"gauge", o.gauge},
            {"delta", encode(rational_flag(o.delta.empty() ? "1" : o.delta, "delta"))},
            {"stage", optional_stage(o.stage)},
            {"best", o.best}};
    if (!o.union_json.empty()) in["union"] = encode(decode_box_union(parse_json(o.union_json, "--union")));
    return in;
  }
  if (command == "corollary-demo") {
    json in{{"gauge", o.gauge}, {"delta", encode(rational_flag(o.delta.empty() ? "1/4" : o.delta, "delta"))}};
    in["a"] = o.a.empty() ? json(nullptr) : encode(rational_flag(o.a, "a"));
    return in;
  }
  if (command == "range-solve") {
    if (o.target.empty() == o.x.empty()) throw PreconditionError("range-solve takes exactly one of --target and --x");
    if (!o.target.empty()) return {{"target", encode(rational_flag(o.target, "target"))}};
    return {{"x", encode(rational_flag(o.x, "x"))}};
  }
  if (command == "tile-check") return {{"base", box_input(o, dim)}, {"q", encode(rational_list(o.q))}};
  throw std::logic_error("unknown command " + command);
}

Box half_space_of(std::size_t dim, unsigned axis, const Rational& at, const std::string& keep) {
  if (axis >= dim) throw PreconditionError("--axis out of range");
  std::vector<Interval> sides(dim, Interval{Coord::neg_inf(), Coord::pos_inf()});
  if (keep == "below") {
    sides[axis].hi = Coord(at);
  } else {
    sides[axis].lo = Coord(at);
  }
  return Box(std::move(sides));
}

SearchLimits search_limits(const json& config) {
  SearchLimits s;
  s.stage_cap = config.at("stage_cap").get<unsigned>();
  return s;
}

json compute(const std::string& command, const json& config, const json& in) {
  const CantorSchedule s = schedule_of(config);
  const unsigned cap = config.at("stage_cap").get<unsigned>();
  const std::size_t budget = config.at("budget").get<std::size_t>();
  const Rational tol = decode_rational(config.at("tol"));
  const StageLimits limits{};

  if (command == "cantor-info") {
    const unsigned n = in.at("stage").get<unsigned>();
    json stages = json::array();
    for (unsigned k = 0; k <= n; ++k) {
      stages.push_back({{"k", k},
                        {"removal", k == 0 ? json(nullptr) : encode(s.removal(k))},
                        {"interval_length", encode(s.interval_length(k))},
                        {"stage_measure", encode(s.stage_measure(k))},
                        {"stage_defect", encode(s.stage_defect(k))}});
    }
    json r{{"limit_measure", encode(s.limit_measure())},
           {"limit_measure_1d", encode(s.limit_measure_1d())},
           {"stages", stages}};
    if (in.contains("point")) r["membership"] = encode(membership(s, decode_point(in.at("point")), cap));
    return r;
  }
  if (command == "measure") {
    RingExpr e = decode_expr(in.at("expr"));
    if (!in.at("stage").is_null()) return {{"bounds", encode(measure_bounds(s, e, in.at("stage").get<unsigned>(), limits))}};
    return {{"bounds", encode(premeasure(s, e, tol, limits))}};
  }
  if (command == "split-check") {
    Box h = half_space_of(s.dim(), in.at("axis").get<unsigned>(), decode_rational(in.at("at")),
                          in.at("keep").get<std::string>());
    return encode(split_identity_check(s, decode_expr(in.at("expr")), h, in.at("stage").get<unsigned>(), limits));
  }
  if (command == "rn-enumerate") {
    auto r = generate_rn(s, decode_expr_list(in.at("pool")), in.at("n").get<unsigned>(), budget,
                         in.at("reference_stage").get<unsigned>(), limits);
    json elements = json::array();
    for (const auto& e : r.elements) elements.push_back(encode(e));
    return {{"elements", elements}, {"level_sizes", r.level_sizes}, {"merged", r.merged}, {"count", r.elements.size()}};
  }
  if (command == "cover-search") {
    CoverOptions opt;
    opt.stage = in.at("stage").get<unsigned>();
    opt.budget = budget;
    opt.clip_to_target = in.at("clip_to_target").get<bool>();
    std::variant<Box, RingExpr> target = in.at("target").contains("box")
                                             ? std::variant<Box, RingExpr>(decode_box(in.at("target").at("box")))
                                             : std::variant<Box, RingExpr>(decode_expr(in.at("target").at("expr")));
    return encode(outer_upper(s, target, decode_expr_list(in.at("pool")), opt, limits, search_limits(config)));
  }
  if (command == "uncovered-box") {
    Box target = decode_box(in.at("target"));
    auto pool = decode_expr_list(in.at("pool"));
    auto r = find_uncovered_box(s, target, pool, search_limits(config));
    if (auto* w = std::get_if<UncoveredWitness>(&r)) {
      json out = encode(r);
      out["verified"] = verify_witness(s, target, pool, *w, limits);
      return out;
    }
    throw BudgetError("no witness up to the stage cap", encode(r));
  }
  if (command == "infinite-cube") {
    CubeReport r = infinite_cube_report(s, in.at("pool_size").get<std::size_t>(), search_limits(config));
    json pool = json::array(), rows = json::array();
    for (const auto& e : r.pool) pool.push_back(encode(e));
    for (const auto& row : r.rows) {
      json entry = encode(row.outcome);
      entry["subset"] = row.subset;
      entry["verified"] = row.verified;
      rows.push_back(std::move(entry));
    }
    return {{"pool", pool},
            {"rows", rows},
            {"subsets", r.rows.size()},
            {"witnesses", r.witnesses},
            {"inconclusive", r.inconclusive}};
  }
  if (command == "pack") {
    CubeFamily f{s.dim(), decode_point(in.at("sides"))};
    return encode(pack_cover(f, decode_rational(in.at("target_side")), decode_rational(in.at("alpha"))));
  }
  if (command == "hausdorff-bound") {
    NuOptions opt;
    opt.stage_cap = cap;
    if (!in.at("stage").is_null()) opt.stage = in.at("stage").get<unsigned>();
    opt.choice = in.at("best").get<bool>() ? StageChoice::Best : StageChoice::Minimal;
    Gauge h{in.at("gauge").get<unsigned>()};
    Rational delta = decode_rational(in.at("delta"));
    if (in.contains("union")) {
      BoxUnion u = decode_box_union(in.at("union"));
      return {{"cover", encode(nu_delta_upper(u, h, delta, opt))}, {"diam_volume", encode(diam_volume_check(u))}};
    }
    return {{"cover", encode(nu_delta_upper(s, h, delta, opt))}};
  }
  if (command == "corollary-demo") {
    NuOptions opt;
    opt.stage_cap = cap;
    Rational a = in.at("a").is_null() ? s.limit_measure() : decode_rational(in.at("a"));
    return encode(corollary_pipeline(s, Gauge{in.at("gauge").get<unsigned>()}, decode_rational(in.at("delta")), a, opt));
  }
  if (command == "range-solve") {
    if (in.contains("target")) {
      LevelSolution sol = solve_level(s, decode_rational(in.at("target")), tol, 60);
      return {{"x", encode(sol.x)}, {"bounds", encode(sol.bounds)}, {"iterations", sol.iterations}};
    }
    return {{"bounds", encode(range_function(s, decode_rational(in.at("x")), tol, 60))}};
  }
  if (command == "tile-check") return encode(tile_check(decode_box(in.at("base")), decode_point(in.at("q"))));
  throw std::logic_error("unknown command " + command);
}

// ---------------------------------------------------------------------------

struct Checks {
  json list = json::array();
  bool ok = true;

  void add(const std::string& name, bool pass) {
    list.push_back({{"name", name}, {"ok", pass}});
    ok = ok && pass;
  }
};

bool holds(const Inequality& i) {
  if (i.relation == "<") return i.lhs < i.rhs;
  if (i.relation == "<=") return i.lhs <= i.rhs;
  if (i.relation == "==") return i.lhs == i.rhs;
  return false;
}

// Checks each command's certificates from the serialized data, then the
// recomputation of the whole result.
void replay(const std::string& command, const json& config, const json& in, const json& result, Checks& c) {
  const CantorSchedule s = schedule_of(config);
  const StageLimits limits{};

  if (command == "uncovered-box") {
    Box target = decode_box(in.at("target"));
    auto pool = decode_expr_list(in.at("pool"));
    c.add("witness", verify_witness(s, target, pool, decode_witness(result.at("witness")), limits));
  } else if (command == "infinite-cube") {
    auto pool = decode_expr_list(result.at("pool"));
    auto expected = grid_pool(s.dim(), in.at("pool_size").get<std::size_t>());
    bool same_pool = pool.size() == expected.size();
    for (std::size_t k = 0; same_pool && k < pool.size(); ++k) same_pool = pool[k] == expected[k];
    c.add("pool", same_pool);
    bool all = true;
    for (const auto& row : result.at("rows")) {
      if (!row.contains("witness")) continue;
      std::vector<RingExpr> family;
      for (auto k : row.at("subset").get<std::vector<std::size_t>>()) family.push_back(pool.at(k));
      all = all && verify_witness(s, Box::unit(s.dim()), family, decode_witness(row.at("witness")), limits);
    }
    c.add("witnesses", all);
  } else if (command == "cover-search") {
    if (result.at("verified").get<bool>()) {
      auto elements = decode_expr_list(result.at("elements"));
      const unsigned stage = result.at("stage").get<unsigned>();
      const json& target = in.at("target");
      bool genuine = target.contains("box")
                         ? verify_cover(s, BoxUnion(decode_box(target.at("box"))), elements, stage, limits).genuine
                         : verify_cover(s, decode_expr(target.at("expr")), elements, stage, limits).genuine;
      c.add("cover", genuine);
      Rational total(0);
      for (const auto& e : elements) total += measure_bounds(s, e, stage, limits).upper;
      c.add("total", encode(total) == result.at("total_premeasure_upper"));
    }
    if (result.contains("witness")) {
      auto pool = decode_expr_list(in.at("pool"));
      Box box = decode_box(in.at("target").at("box"));
      if (in.at("clip_to_target").get<bool>()) {
        for (auto& e : pool) e = clip_to_box(e, box);
      }
      c.add("witness", verify_witness(s, box, pool, decode_witness(result.at("witness")), limits));
    }
  } else if (command == "pack") {
    CubeFamily f{s.dim(), decode_point(in.at("sides"))};
    PackingLayout l = decode_layout(result);
    c.add("layout", verify_layout(f, l));
    c.add("target", l.target == Box::cube(Point(s.dim(), Rational(0)),
                                          decode_rational(in.at("alpha")) * decode_rational(in.at("target_side"))));
  } else if (command == "hausdorff-bound") {
    DeltaCover cover = decode_delta_cover(result.at("cover"));
    Gauge h{in.at("gauge").get<unsigned>()};
    ExtendedRational sum(Rational(0));
    bool small = true;
    std::vector<Box> boxes;
    for (const auto& q : cover.cubes) {
      ExtendedRational diam = cube_diameter(q.side, cover.dim);
      small = small && diam < ExtendedRational(cover.delta);
      sum += h(diam);
      boxes.push_back(Box::cube(q.corner, q.side));
    }
    c.add("diameters below delta", small);
    c.add("gauge sum", sum == cover.gauge_sum);
    BoxUnion covered(cover.dim, boxes);
    if (in.contains("union")) {
      c.add("covers union", covered.includes(decode_box_union(in.at("union"))));
    } else {
      c.add("covers stage set", covered.includes(s.stage_approx(cover.stage, limits)));
    }
  } else if (command == "corollary-demo") {
    bool all = true;
    for (const auto& j : result.at("inequalities")) {
      Inequality i = decode_inequality(j);
      all = all && (holds(i) == i.holds) && (i.informational || i.holds);
    }
    c.add("inequalities", all);
    const std::size_t n = result.at("truncation").get<std::size_t>();
    const Rational side = decode_rational(result.at("cube_side"));
    CubeFamily f{s.dim(), std::vector<Rational>(n, side)};
    c.add("packing", verify_layout(f, decode_layout(result.at("packing"))));
    c.add("diam Q == diam E", cube_diameter(side, s.dim()) == decode_extended(result.at("cover").at("diameter")));
  } else if (command == "range-solve" && in.contains("target")) {
    MeasureBounds b = range_function(s, decode_rational(result.at("x")), decode_rational(config.at("tol")), 60);
    c.add("brackets target", b.contains(decode_rational(in.at("target"))));
  }

  // every command is deterministic, so a full recomputation must agree
  c.add("recomputed", compute(command, config, in) == result);
}

}  // namespace

json verify_report(const json& report) {
  Checks c;
  std::string command;
  try {
    command = report.at("command").get<std::string>();
    replay(command, report.at("config"), report.at("inputs"), report.at("result"), c);
  } catch (const std::exception& e) {
    c.add(std::string("replay: ") + e.what(), false);
  }
  return {{"command", "verify"}, {"verified_command", command}, {"checks", c.list}, {"ok", c.ok}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact finite-stage computations for fat Cantor sets and translation-invariant measures", "fatmeasure"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Options o;
  app.add_option("--d", o.d, "dimension")->check(CLI::Range(1u, 8u));
  app.add_option("--c", o.c, "removal constant c (rational)");
  app.add_option("--rho", o.rho, "removal ratio rho (rational)");
  app.add_option("--stage-cap", o.stage_cap, "deepest stage any search may use")->check(CLI::PositiveNumber);
  app.add_option("--budget", o.budget, "search budget (subsets, R_n elements)")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "tolerance (rational)");
  app.add_option("--seed", o.seed, "seed, recorded in the report");
  app.add_option("--out", o.out, "write the report here instead of stdout");
  app.add_option("--verify", o.verify, "replay a report file and check every certificate");

  auto add_expr = [&](CLI::App* sub) {
    sub->add_option("--expr", o.expr, "ring expression (JSON)");
    sub->add_option("--expr-file", o.expr_file, "file holding a ring expression (JSON)");
  };
  auto add_pool = [&](CLI::App* sub) {
    sub->add_option("--pool", o.pool, "JSON array of ring expressions");
    sub->add_option("--pool-file", o.pool_file, "file holding a JSON array of ring expressions");
    sub->add_option("--grid-pool", o.grid_pool, "use the first k clipped grid translates");
  };
  auto add_box = [&](CLI::App* sub) {
    sub->add_option("--lo", o.lo, "lower corner (comma separated rationals)")->delimiter(',');
    sub->add_option("--hi", o.hi, "upper corner (comma separated rationals)")->delimiter(',');
  };

  auto* info = app.add_subcommand("cantor-info", "stage lengths and measures; optional point membership");
  info->add_option("--stage", o.stage, "last stage listed (default 3)");
  info->add_option("--point", o.point, "point to classify")->delimiter(',');

  auto* measure = app.add_subcommand("measure", "certified measure bounds of a ring expression");
  add_expr(measure);
  measure->add_option("--stage", o.stage, "fixed stage (default: deepen until --tol)");

  auto* split = app.add_subcommand("split-check", "exact splitting identity at a finite stage");
  add_expr(split);
  split->add_option("--axis", o.axis, "half-space axis");
  split->add_option("--at", o.at, "half-space boundary");
  split->add_option("--keep", o.keep, "'below' or 'above'");
  split->add_option("--stage", o.stage, "stage (default 4)");

  auto* rn = app.add_subcommand("rn-enumerate", "enumerate R_n from a pool");
  add_pool(rn);
  rn->add_option("--n", o.n, "level");
  rn->add_option("--reference-stage", o.reference_stage, "stage used to merge duplicates");

  auto* cover = app.add_subcommand("cover-search", "finite-cover upper bound for the outer measure");
  add_expr(cover);
  add_box(cover);
  add_pool(cover);
  cover->add_option("--stage", o.stage, "stage (default 6)");
  cover->add_flag("--clip-to-target", o.clip_to_target, "clip pool elements to the target first");

  auto* uncovered = app.add_subcommand("uncovered-box", "certified box missed by every element");
  add_box(uncovered);
  add_pool(uncovered);

  auto* cube = app.add_subcommand("infinite-cube", "witnesses for every subset of a grid pool");
  cube->add_option("--pool-size", o.pool_size, "pool size");

  auto* pack = app.add_subcommand("pack", "cover [0, alpha*side]^d by translates of given cubes");
  pack->add_option("--sides", o.sides, "cube sides (comma separated rationals)")->delimiter(',')->required();
  pack->add_option("--alpha", o.alpha, "scale");
  pack->add_option("--target-side", o.target_side, "target side in units of alpha");

  auto* hb = app.add_subcommand("hausdorff-bound", "gauge-sum upper bound from an explicit delta-cover");
  hb->add_option("--gauge", o.gauge, "exponent s of h(t) = t^s")->check(CLI::PositiveNumber);
  hb->add_option("--delta", o.delta, "delta (default 1)");
  hb->add_option("--stage", o.stage, "explicit stage");
  hb->add_flag("--best", o.best, "smallest sum over admissible stages up to --stage-cap");
  hb->add_option("--union", o.union_json, "box union (JSON) instead of the Cantor set");

  auto* cor = app.add_subcommand("corollary-demo", "cover, equal-diameter cubes, packing, gauge bound");
  cor->add_option("--gauge", o.gauge, "exponent s of h(t) = t^s")->check(CLI::PositiveNumber);
  cor->add_option("--delta", o.delta, "delta (default 1/4)");
  cor->add_option("--a", o.a, "lower bound for the measure of C^d (default: exact)");

  auto* range = app.add_subcommand("range-solve", "solve lambda(C^d, x_1 <= x) = target, or bound it at --x");
  range->add_option("--target", o.target, "target level");
  range->add_option("--x", o.x, "evaluate at this x");

  auto* tile = app.add_subcommand("tile-check", "double counting of a box and its rational rescaling");
  add_box(tile);
  tile->add_option("--q", o.q, "scale factors (comma separated rationals)")->delimiter(',')->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os_out, os_err;
    int code = app.exit(e, os_out, os_err);
    out << os_out.str();
    err << os_err.str();
    return code == 0 ? kOk : kPrecondition;
  }

  auto emit = [&](const json& report) {
    std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out);
      if (!file) throw PreconditionError("cannot write '" + o.out + "'");
      file << text;
    }
  };

  std::string command;
  json report;
  try {
    if (!o.verify.empty()) {
      json result = verify_report(parse_json(read_file(o.verify), o.verify));
      emit(result);
      if (!result.at("ok").get<bool>()) err << "verification failed\n";
      return result.at("ok").get<bool>() ? kOk : kInternal;
    }
    auto subs = app.get_subcommands();
    if (subs.empty()) {
      err << app.help();
      return kPrecondition;
    }
    command = subs.front()->get_name();
    const json config = config_json(o);
    schedule_of(config);  // validates the schedule
    rational_flag(o.tol, "tol") > 0 ? void() : throw PreconditionError("--tol must be positive");
    report = {{"command", command}, {"config", config}};
    report["inputs"] = inputs_for(command, o);
    report["result"] = compute(command, config, report["inputs"]);
    emit(report);
    return kOk;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << "\n";
    report["status"] = "budget_exhausted";
    report["partial"] = e.partial();
    try {
      emit(report);
    } catch (const std::exception&) {
    }
    return kBudget;
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace fatmeasure::cli
