#include "fatmeasure/cover.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "fatmeasure/cells.hpp"
#include "fatmeasure/errors.hpp"

namespace fatmeasure {

RingExpr positive_hull(const RingExpr& e) {
  switch (e.kind()) {
    case RingExpr::Kind::Gen:
      return e;
    case RingExpr::Kind::Union: {
      RingExpr a = positive_hull(e.left());
      RingExpr b = positive_hull(e.right());
      if (a == e.left() && b == e.right()) return e;
      return RingExpr::unite(std::move(a), std::move(b));
    }
    case RingExpr::Kind::Diff:
    case RingExpr::Kind::Inter:
      return positive_hull(e.left());
  }
  throw std::logic_error("unreachable");
}

namespace {

void require_dims(const CantorSchedule& s, std::size_t target_dim, const std::vector<RingExpr>& elements) {
  if (target_dim != s.dim()) throw PreconditionError("target dimension differs from the schedule");
  for (const auto& e : elements) {
    if (e.dim() != s.dim()) throw PreconditionError("element dimension differs from the schedule");
  }
}

BoxUnion hull_union(const CantorSchedule& s, const std::vector<RingExpr>& elements, unsigned n,
                    const StageLimits& limits, const std::optional<Box>& window) {
  BoxUnion u(s.dim());
  for (const auto& e : elements) u = u.unite(approx_set(s, positive_hull(e), n, limits, window));
  return u;
}

// Cells where some limit pattern allowed at stage n puts a point in the
// target but in none of the elements. Variables are widened slightly so that
// the right endpoints of stage intervals, which belong to C, are included.
bool genuine_cover(const CantorSchedule& s, const RingExpr& target, const std::vector<RingExpr>& elements, unsigned n,
                   const StageLimits& limits) {
  CellSystem cells(s, limits);
  auto ft = cells.compile(target);
  std::vector<CellSystem::Formula> fe;
  for (const auto& e : elements) fe.push_back(cells.compile(e));
  auto keep = [&](Mask vars, Mask boxes) {
    return CellSystem::exists_below(vars, [&](Mask beta) {
      if (!cells.eval(ft, beta, boxes)) return false;
      for (const auto& f : fe) {
        if (cells.eval(f, beta, boxes)) return false;
      }
      return true;
    });
  };
  return cells.evaluate(n, keep, std::nullopt, s.removal(n + 1)).empty();
}

// Open subintervals of one coordinate, in increasing order.
using OpenSet = std::vector<std::pair<Rational, Rational>>;

// Removes the closed stage-m intervals of A_m + t from an open set.
OpenSet subtract_stage(const CantorSchedule& s, const OpenSet& u, unsigned m, const Rational& t) {
  OpenSet out;
  for (const auto& [a, b] : u) {
    Rational cursor = a;
    for (const auto& iv : s.intervals_within(m, Coord(Rational(a - t)), Coord(Rational(b - t)))) {
      Rational lo = iv.lo + t, hi = iv.hi + t;
      if (cursor < lo) out.emplace_back(cursor, std::min(lo, b));
      cursor = std::max(cursor, hi);
      if (cursor >= b) break;
    }
    if (cursor < b) out.emplace_back(cursor, b);
  }
  return out;
}

struct SearchLeaf {
  std::size_t element;
  std::size_t leaf;
  Point translation;
};

class JointSearch {
 public:
  JointSearch(const CantorSchedule& s, const std::vector<SearchLeaf>& leaves, unsigned m, std::size_t budget)
      : s_(s), leaves_(leaves), m_(m), budget_(budget) {}

  std::optional<std::vector<OpenSet>> run(std::vector<OpenSet> start) {
    if (dfs(0, start)) return result_;
    return std::nullopt;
  }

 private:
  bool dfs(std::size_t k, const std::vector<OpenSet>& u) {
    if (k == leaves_.size()) {
      result_ = u;
      return true;
    }
    if (nodes_++ >= budget_) return false;
    const Point& t = leaves_[k].translation;
    std::vector<OpenSet> reduced(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      reduced[i] = subtract_stage(s_, u[i], m_, t[i]);
      // already avoided in this coordinate: no choice to make
      if (reduced[i] == u[i]) return dfs(k + 1, u);
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (reduced[i].empty()) continue;
      std::vector<OpenSet> next = u;
      next[i] = std::move(reduced[i]);
      if (dfs(k + 1, next)) return true;
      if (nodes_ >= budget_) return false;
    }
    return false;
  }

  const CantorSchedule& s_;
  const std::vector<SearchLeaf>& leaves_;
  unsigned m_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<OpenSet> result_;
};

}  // namespace

CoverCheck verify_cover(const CantorSchedule& s, const BoxUnion& target, const std::vector<RingExpr>& elements,
                        unsigned stage, const StageLimits& limits) {
  require_dims(s, target.dim(), elements);
  CoverCheck c;
  c.stage = stage;
  std::optional<Box> window;
  if (!target.empty()) window = target.bounding_box();
  BoxUnion rest = target.subtract(hull_union(s, elements, stage, limits, window));
  c.uncovered_measure = rest.measure();
  c.covers_outer_hulls = rest.empty();
  c.genuine = target.empty();
  return c;
}

CoverCheck verify_cover(const CantorSchedule& s, const RingExpr& target, const std::vector<RingExpr>& elements,
                        unsigned stage, const StageLimits& limits) {
  require_dims(s, target.dim(), elements);
  CoverCheck c;
  c.stage = stage;
  BoxUnion t = approx_set(s, target, stage, limits);
  std::optional<Box> window;
  if (!t.empty()) window = t.bounding_box();
  BoxUnion rest = t.subtract(hull_union(s, elements, stage, limits, window));
  c.uncovered_measure = rest.measure();
  c.covers_outer_hulls = rest.empty();
  c.genuine = c.covers_outer_hulls && genuine_cover(s, target, elements, stage, limits);
  return c;
}

std::variant<UncoveredWitness, NeedsDeeperStage> find_uncovered_box(const CantorSchedule& s, const Box& target,
                                                                    const std::vector<RingExpr>& elements,
                                                                    const SearchLimits& search) {
  require_dims(s, target.dim(), elements);
  if (!target.bounded() || target.empty()) throw PreconditionError("target must be a bounded box with positive sides");
  const std::size_t d = s.dim();

  std::vector<LeafCertificate> clip_certs;
  std::vector<SearchLeaf> leaves;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto gens = positive_hull(elements[i]).leaves();
    for (std::size_t l = 0; l < gens.size(); ++l) {
      if (target.intersect(gens[l].clip).empty()) {
        clip_certs.push_back({i, l, gens[l].translation, true, {}});
      } else {
        leaves.push_back({i, l, gens[l].translation});
      }
    }
  }

  std::vector<OpenSet> start(d);
  for (std::size_t i = 0; i < d; ++i) start[i] = {{target.side(i).lo.value(), target.side(i).hi.value()}};

  for (unsigned m = 0; m <= search.stage_cap; ++m) {
    auto found = JointSearch(s, leaves, m, search.node_budget).run(start);
    if (!found) continue;
    Point lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& [a, b] = found->at(i).front();
      Rational quarter = (b - a) / 4;
      lo[i] = a + quarter;
      hi[i] = b - quarter;
    }
    UncoveredWitness w{Box(lo, hi), m, {}};
    std::vector<LeafCertificate> certs = clip_certs;
    for (const auto& leaf : leaves) {
      auto stage = disjoint_stage(s, leaf.translation, w.box, m);
      if (!stage) throw std::logic_error("witness box meets a translate it was built to avoid");
      certs.push_back({leaf.element, leaf.leaf, leaf.translation, false, GapCertificate{*stage, w.box}});
    }
    std::sort(certs.begin(), certs.end(), [](const LeafCertificate& a, const LeafCertificate& b) {
      return std::pair(a.element, a.leaf) < std::pair(b.element, b.leaf);
    });
    w.certificates = std::move(certs);
    return w;
  }
  return NeedsDeeperStage{search.stage_cap};
}

bool verify_witness(const CantorSchedule& s, const Box& target, const std::vector<RingExpr>& elements,
                    const UncoveredWitness& w, const StageLimits& limits) {
  if (w.box.dim() != s.dim() || !w.box.bounded() || w.box.empty()) return false;
  if (!w.box.open_within(target)) return false;
  std::size_t expected = 0;
  std::vector<std::vector<Generator>> gens;
  for (const auto& e : elements) {
    gens.push_back(positive_hull(e).leaves());
    expected += gens.back().size();
  }
  if (w.certificates.size() != expected) return false;
  for (const auto& c : w.certificates) {
    if (c.element >= gens.size() || c.leaf >= gens[c.element].size()) return false;
    const Generator& g = gens[c.element][c.leaf];
    if (g.translation != c.translation) return false;
    if (c.clip_disjoint) {
      if (!w.box.intersect(g.clip).empty()) return false;
    } else {
      if (c.gap.stage > w.stage || !w.box.open_within(c.gap.witness)) return false;
      if (!verify_gap(s, g.translation, c.gap)) return false;
    }
  }
  for (const auto& e : elements) {
    if (!approx_set(s, positive_hull(e), w.stage, limits, w.box).empty()) return false;
  }
  return true;
}

namespace {

bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

CoverAttempt outer_upper(const CantorSchedule& s, const std::variant<Box, RingExpr>& target,
                         const std::vector<RingExpr>& pool, const CoverOptions& options, const StageLimits& limits,
                         const SearchLimits& search) {
  const std::size_t target_dim =
      std::holds_alternative<Box>(target) ? std::get<Box>(target).dim() : std::get<RingExpr>(target).dim();
  require_dims(s, target_dim, pool);

  CoverAttempt out;
  out.target = target;
  out.stage = options.stage;

  if (const Box* box = std::get_if<Box>(&target)) {
    // A region with interior is never covered by sets with empty interior;
    // the witness below excludes every sub-family at once.
    if (box->empty()) {
      out.total_premeasure_upper = Rational(0);
      out.verified = true;
      out.exhaustive_complete = true;
      return out;
    }
    if (!box->bounded()) throw PreconditionError("box target must be bounded");
    std::vector<RingExpr> elements = pool;
    if (options.clip_to_target) {
      for (auto& e : elements) e = clip_to_box(e, *box);
    }
    auto found = find_uncovered_box(s, *box, elements, search);
    if (auto* w = std::get_if<UncoveredWitness>(&found)) {
      out.witness = *w;
      out.exhaustive_complete = true;
    }
    return out;
  }

  const RingExpr& t = std::get<RingExpr>(target);
  BoxUnion tn = approx_set(s, t, options.stage, limits);
  std::optional<Box> window;
  if (!tn.empty()) window = tn.bounding_box();

  std::vector<RingExpr> elements = pool;
  if (options.clip_to_target && window) {
    for (auto& e : elements) e = clip_to_box(e, *window);
  }
  std::vector<BoxUnion> hulls;
  std::vector<Rational> uppers;
  for (const auto& e : elements) {
    hulls.push_back(approx_set(s, positive_hull(e), options.stage, limits, window));
    uppers.push_back(measure_bounds(s, e, options.stage, limits).upper);
  }

  std::optional<Rational> best_total;
  std::vector<std::size_t> best;
  auto consider = [&](const std::vector<std::size_t>& idx) {
    Rational total(0);
    for (auto i : idx) total += uppers[i];
    if (best_total && (total > *best_total || (total == *best_total && !lex_less(idx, best)))) return;
    ++out.subsets_checked;
    BoxUnion covered(s.dim());
    for (auto i : idx) covered = covered.unite(hulls[i]);
    if (!covered.includes(tn)) return;
    std::vector<RingExpr> chosen;
    for (auto i : idx) chosen.push_back(elements[i]);
    if (!genuine_cover(s, t, chosen, options.stage, limits)) return;
    best_total = total;
    best = idx;
  };

  // greedy by marginal covered measure, ties to the lower index
  {
    std::vector<std::size_t> chosen;
    BoxUnion covered(s.dim());
    std::vector<bool> used(elements.size(), false);
    while (!covered.includes(tn)) {
      std::optional<std::size_t> pick;
      Rational gain(0);
      for (std::size_t i = 0; i < elements.size(); ++i) {
        if (used[i]) continue;
        Rational g = hulls[i].intersect(tn).subtract(covered).measure();
        if (g > gain) {
          gain = g;
          pick = i;
        }
      }
      if (!pick) break;
      used[*pick] = true;
      chosen.push_back(*pick);
      covered = covered.unite(hulls[*pick].intersect(tn));
    }
    std::sort(chosen.begin(), chosen.end());
    consider(chosen);
  }

  // exhaustive: by size, then lexicographic, until the budget is spent
  const std::size_t k = elements.size();
  bool complete = true;
  for (std::size_t size = 0; size <= k && complete; ++size) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      if (out.subsets_checked >= options.budget) {
        complete = false;
        break;
      }
      consider(idx);
      // next combination
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  out.exhaustive_complete = complete;

  if (best_total) {
    out.total_premeasure_upper = best_total;
    out.verified = true;
    out.indices = best;
    for (auto i : best) out.elements.push_back(elements[i]);
  }
  return out;
}

std::vector<RingExpr> grid_pool(std::size_t dim, std::size_t size) {
  std::vector<RingExpr> pool;
  for (std::size_t k = 0; k < size; ++k) {
    Point x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = ratio(static_cast<long>((k * (2 * i + 1)) % 16), 16);
    pool.push_back(RingExpr::gen(std::move(x), Box::unit(dim)));
  }
  return pool;
}

CubeReport infinite_cube_report(const CantorSchedule& s, std::size_t pool_size, const SearchLimits& search,
                                std::size_t max_subsets) {
  if (pool_size >= 63 || (std::size_t{1} << pool_size) - 1 > max_subsets) {
    throw BudgetError("too many subsets", nlohmann::json{{"subsets_allowed", max_subsets}});
  }
  CubeReport r;
  r.dim = s.dim();
  r.pool = grid_pool(s.dim(), pool_size);
  const Box cube = Box::unit(s.dim());
  const std::uint64_t first = pool_size == 0 ? 0 : 1;
  for (std::uint64_t mask = first; mask < (std::uint64_t{1} << pool_size); ++mask) {
    CubeReportRow row{{}, NeedsDeeperStage{}, false};
    std::vector<RingExpr> family;
    for (std::size_t k = 0; k < pool_size; ++k) {
      if (mask >> k & 1) {
        row.subset.push_back(k);
        family.push_back(r.pool[k]);
      }
    }
    row.outcome = find_uncovered_box(s, cube, family, search);
    if (auto* w = std::get_if<UncoveredWitness>(&row.outcome)) {
      row.verified = verify_witness(s, cube, family, *w);
      if (row.verified) ++r.witnesses;
    } else {
      ++r.inconclusive;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace fatmeasure
