#include "fatmeasure/ring.hpp"

#include <map>

#include "fatmeasure/cells.hpp"
#include "fatmeasure/errors.hpp"

namespace fatmeasure {

struct RingExpr::Node {
  Kind kind;
  Generator gen;
  std::optional<RingExpr> left;
  std::optional<RingExpr> right;
  std::size_t dim = 0;
  std::size_t leaves = 0;
  bool has_diff = false;
};

RingExpr RingExpr::gen(Point translation, Box clip) {
  if (translation.size() != clip.dim()) throw PreconditionError("generator translation and clip dimensions differ");
  if (translation.empty()) throw PreconditionError("generator dimension must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Gen;
  n->dim = clip.dim();
  n->gen = Generator{std::move(translation), std::move(clip)};
  n->leaves = 1;
  return RingExpr(std::move(n));
}

RingExpr RingExpr::binary(Kind kind, RingExpr a, RingExpr b) {
  if (a.dim() != b.dim()) throw PreconditionError("ring expression dimension mismatch");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->dim = a.dim();
  n->leaves = a.leaf_count() + b.leaf_count();
  n->has_diff = kind == Kind::Diff || a.has_difference() || b.has_difference();
  n->left = std::move(a);
  n->right = std::move(b);
  return RingExpr(std::move(n));
}

RingExpr RingExpr::unite(RingExpr a, RingExpr b) { return binary(Kind::Union, std::move(a), std::move(b)); }
RingExpr RingExpr::difference(RingExpr a, RingExpr b) { return binary(Kind::Diff, std::move(a), std::move(b)); }
RingExpr RingExpr::intersection(RingExpr a, RingExpr b) { return binary(Kind::Inter, std::move(a), std::move(b)); }

RingExpr::Kind RingExpr::kind() const { return node_->kind; }
std::size_t RingExpr::dim() const { return node_->dim; }
std::size_t RingExpr::leaf_count() const { return node_->leaves; }
bool RingExpr::has_difference() const { return node_->has_diff; }

const Generator& RingExpr::generator() const {
  if (node_->kind != Kind::Gen) throw std::logic_error("generator() on an internal node");
  return node_->gen;
}

const RingExpr& RingExpr::left() const {
  if (node_->kind == Kind::Gen) throw std::logic_error("left() on a leaf");
  return *node_->left;
}

const RingExpr& RingExpr::right() const {
  if (node_->kind == Kind::Gen) throw std::logic_error("right() on a leaf");
  return *node_->right;
}

std::vector<Generator> RingExpr::leaves() const {
  std::vector<Generator> out;
  std::vector<const RingExpr*> stack{this};
  while (!stack.empty()) {
    const RingExpr* e = stack.back();
    stack.pop_back();
    if (e->kind() == Kind::Gen) {
      out.push_back(e->generator());
    } else {
      stack.push_back(&e->right());
      stack.push_back(&e->left());
    }
  }
  return out;
}

bool operator==(const RingExpr& a, const RingExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == RingExpr::Kind::Gen) return a.generator() == b.generator();
  return a.left() == b.left() && a.right() == b.right();
}

// ---------------------------------------------------------------------------
// CellSystem

int CellSystem::var_index(const Point& x) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] == x) return static_cast<int>(i);
  }
  if (x.size() != schedule_.dim()) throw PreconditionError("expression dimension differs from the schedule");
  vars_.push_back(x);
  var_boxes_.emplace_back();
  return static_cast<int>(vars_.size() - 1);
}

int CellSystem::add_box(const Box& b) {
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    if (boxes_[i] == b) return static_cast<int>(i);
  }
  boxes_.push_back(b);
  return static_cast<int>(boxes_.size() - 1);
}

int CellSystem::compile_node(const RingExpr& e, Formula& f) {
  Formula::Node node{e.kind()};
  if (e.kind() == RingExpr::Kind::Gen) {
    node.var = var_index(e.generator().translation);
    node.box = add_box(e.generator().clip);
    auto& vb = var_boxes_[node.var];
    if (std::find(vb.begin(), vb.end(), node.box) == vb.end()) vb.push_back(node.box);
  } else {
    node.left = compile_node(e.left(), f);
    node.right = compile_node(e.right(), f);
  }
  f.nodes.push_back(node);
  return static_cast<int>(f.nodes.size() - 1);
}

CellSystem::Formula CellSystem::compile(const RingExpr& e) {
  Formula f;
  f.root = compile_node(e, f);
  return f;
}

bool CellSystem::eval(const Formula& f, Mask vars, Mask boxes) const {
  std::vector<char> value(f.nodes.size());
  // children are compiled before parents, so one forward pass suffices
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const auto& n = f.nodes[i];
    switch (n.kind) {
      case RingExpr::Kind::Gen:
        value[i] = ((vars >> n.var) & 1u) && ((boxes >> n.box) & 1u);
        break;
      case RingExpr::Kind::Union:
        value[i] = value[n.left] || value[n.right];
        break;
      case RingExpr::Kind::Diff:
        value[i] = value[n.left] && !value[n.right];
        break;
      case RingExpr::Kind::Inter:
        value[i] = value[n.left] && value[n.right];
        break;
    }
  }
  return value[f.root];
}

bool CellSystem::exists_below(Mask vars, const std::function<bool(Mask)>& pred) {
  for (Mask sub = vars;; sub = (sub - 1) & vars) {
    if (pred(sub)) return true;
    if (sub == 0) return false;
  }
}

BoxUnion CellSystem::evaluate(unsigned n, const std::function<bool(Mask, Mask)>& keep, const std::optional<Box>& window,
                              const Rational& dilation) const {
  const std::size_t d = schedule_.dim();
  const std::size_t V = vars_.size();
  const std::size_t K = boxes_.size();
  if (V + K + (window ? 1 : 0) > 64) throw BudgetError("too many distinct translates and clip boxes (limit 64)");

  std::vector<std::vector<Box>> storage;
  storage.reserve(V + K + 1);
  for (std::size_t v = 0; v < V; ++v) {
    // A variable only matters inside the clips it is paired with.
    Box reach = boxes_[var_boxes_[v].front()];
    for (int b : var_boxes_[v]) {
      const Box& c = boxes_[b];
      std::vector<Interval> sides;
      for (std::size_t i = 0; i < d; ++i) {
        sides.push_back({std::min(reach.side(i).lo, c.side(i).lo), std::max(reach.side(i).hi, c.side(i).hi)});
      }
      reach = Box(std::move(sides));
    }
    if (window) reach = reach.intersect(*window);
    Point neg = vars_[v];
    for (auto& x : neg) x = -x;
    std::vector<Box> boxes;
    if (!reach.empty()) {
      boxes = schedule_.stage_boxes_within(n, reach.translate(neg), limits_, dilation);
      for (auto& b : boxes) b = b.translate(vars_[v]);
    }
    storage.push_back(std::move(boxes));
  }
  for (std::size_t k = 0; k < K; ++k) storage.push_back({boxes_[k]});
  if (window) storage.push_back({*window});

  std::vector<std::span<const Box>> ops(storage.begin(), storage.end());
  const Mask var_mask = V == 64 ? ~Mask{0} : ((Mask{1} << V) - 1);
  const Mask box_mask = (K == 64 ? ~Mask{0} : ((Mask{1} << K) - 1));
  const Mask window_bit = window ? Mask{1} << (V + K) : 0;
  std::unordered_map<Mask, bool> memo;
  auto pred = [&](Mask m) {
    if (window && !(m & window_bit)) return false;
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    bool r = keep(m & var_mask, (m >> V) & box_mask);
    memo.emplace(m, r);
    return r;
  };
  return combine(d, ops, pred);
}

// ---------------------------------------------------------------------------

BoxUnion approx_set(const CantorSchedule& s, const RingExpr& e, unsigned n, const StageLimits& limits,
                    const std::optional<Box>& window) {
  CellSystem cells(s, limits);
  auto f = cells.compile(e);
  return cells.evaluate(n, [&](Mask v, Mask b) { return cells.eval(f, v, b); }, window);
}

namespace {

Rational single_leaf_measure(const CantorSchedule& s, const Generator& g, unsigned n) {
  Rational m(1);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const Interval& side = g.clip.side(i);
    Interval shifted{side.lo.shifted(Rational(-g.translation[i])), side.hi.shifted(Rational(-g.translation[i]))};
    m *= s.measure_within_1d(n, shifted);
  }
  return m;
}

}  // namespace

MeasureBounds measure_bounds(const CantorSchedule& s, const RingExpr& e, unsigned n, const StageLimits& limits) {
  if (e.dim() != s.dim()) throw PreconditionError("expression dimension differs from the schedule");
  const Rational slack = Rational(static_cast<unsigned long>(e.leaf_count())) * s.stage_defect(n);

  Rational approx, possible;
  if (e.kind() == RingExpr::Kind::Gen) {
    approx = single_leaf_measure(s, e.generator(), n);
    possible = approx;
  } else {
    CellSystem cells(s, limits);
    auto f = cells.compile(e);
    approx = cells.evaluate(n, [&](Mask v, Mask b) { return cells.eval(f, v, b); }).measure();
    if (e.has_difference()) {
      auto can_be_in = [&](Mask v, Mask b) {
        return CellSystem::exists_below(v, [&](Mask beta) { return cells.eval(f, beta, b); });
      };
      possible = cells.evaluate(n, can_be_in).measure();
    } else {
      possible = approx;
    }
  }

  MeasureBounds out;
  out.stage = n;
  out.leaf_count = e.leaf_count();
  out.lower = approx - slack;
  if (out.lower < 0) out.lower = 0;
  out.upper = approx + slack;
  if (possible < out.upper) out.upper = possible;
  return out;
}

MeasureBounds premeasure(const CantorSchedule& s, const RingExpr& e, const Rational& tol, const StageLimits& limits) {
  if (sgn(tol) <= 0) throw PreconditionError("premeasure tolerance must be positive");
  std::optional<MeasureBounds> best;
  for (unsigned n = 1;; ++n) {
    try {
      MeasureBounds b = measure_bounds(s, e, n, limits);
      if (b.width() <= tol) return b;
      best = b;
    } catch (const BudgetError& err) {
      nlohmann::json partial = nullptr;
      if (best) {
        partial = {{"lower", to_string(best->lower)},
                   {"upper", to_string(best->upper)},
                   {"stage", best->stage},
                   {"leaf_count", best->leaf_count}};
      }
      throw BudgetError(std::string("premeasure: ") + err.what(), partial);
    }
  }
}

RingExpr clip_to_box(const RingExpr& e, const Box& box) {
  if (box.dim() != e.dim()) throw PreconditionError("dimension mismatch");
  switch (e.kind()) {
    case RingExpr::Kind::Gen:
      return RingExpr::gen(e.generator().translation, e.generator().clip.intersect(box));
    case RingExpr::Kind::Union:
      return RingExpr::unite(clip_to_box(e.left(), box), clip_to_box(e.right(), box));
    case RingExpr::Kind::Diff:
      return RingExpr::difference(clip_to_box(e.left(), box), e.right());
    case RingExpr::Kind::Inter:
      return RingExpr::intersection(clip_to_box(e.left(), box), e.right());
  }
  throw std::logic_error("unreachable");
}

namespace {

std::string key_of(const BoxUnion& u) {
  std::string k;
  for (const auto& b : u.boxes()) {
    for (const auto& side : b.sides()) {
      k += to_string(side.lo.value());
      k += ',';
      k += to_string(side.hi.value());
      k += ';';
    }
    k += '|';
  }
  return k;
}

}  // namespace

RnEnumeration generate_rn(const CantorSchedule& s, const std::vector<RingExpr>& pool, unsigned n,
                          std::size_t max_elements, unsigned reference_stage, const StageLimits& limits) {
  if (n == 0) throw PreconditionError("generate_rn needs n >= 1");
  RnEnumeration out;
  out.reference_stage = reference_stage;
  std::map<std::string, std::size_t> seen;
  auto offer = [&](const RingExpr& e) {
    std::string key = key_of(approx_set(s, e, reference_stage, limits));
    if (seen.count(key)) {
      ++out.merged;
      return;
    }
    if (out.elements.size() >= max_elements) {
      throw BudgetError("generate_rn: more than " + std::to_string(max_elements) + " distinct elements",
                        nlohmann::json{{"level_sizes", out.level_sizes}, {"elements", out.elements.size()}});
    }
    seen.emplace(std::move(key), out.elements.size());
    out.elements.push_back(e);
  };
  for (const auto& g : pool) offer(g);
  out.level_sizes.push_back(out.elements.size());
  for (unsigned level = 2; level <= n; ++level) {
    const std::size_t prev = out.elements.size();
    for (std::size_t a = 0; a < prev; ++a) {
      for (std::size_t b = 0; b < prev; ++b) {
        // copies: offer() may grow `elements`
        RingExpr ea = out.elements[a], eb = out.elements[b];
        offer(RingExpr::unite(ea, eb));
        offer(RingExpr::difference(ea, eb));
      }
    }
    out.level_sizes.push_back(out.elements.size());
  }
  return out;
}

bool is_half_space(const Box& box) {
  int finite = 0;
  for (const auto& side : box.sides()) finite += side.lo.finite() + side.hi.finite();
  return finite == 1;
}

Box complement_half_space(const Box& half_space) {
  if (!is_half_space(half_space)) throw PreconditionError("not an axis half-space (exactly one finite bound required)");
  std::vector<Interval> sides(half_space.sides().begin(), half_space.sides().end());
  for (auto& side : sides) {
    if (side.lo.finite()) {
      side = {Coord::neg_inf(), side.lo};
    } else if (side.hi.finite()) {
      side = {side.hi, Coord::pos_inf()};
    }
  }
  return Box(std::move(sides));
}

SplitReport split_identity_check(const CantorSchedule& s, const RingExpr& e, const Box& half_space, unsigned n,
                                 const StageLimits& limits) {
  if (half_space.dim() != e.dim()) throw PreconditionError("dimension mismatch");
  SplitReport r;
  r.half_space = half_space;
  r.complement = complement_half_space(half_space);
  r.stage = n;
  r.whole = approx_set(s, e, n, limits).measure();
  r.inside = approx_set(s, clip_to_box(e, r.half_space), n, limits).measure();
  r.outside = approx_set(s, clip_to_box(e, r.complement), n, limits).measure();
  r.equal = r.whole == r.inside + r.outside;
  return r;
}

}  // namespace fatmeasure
