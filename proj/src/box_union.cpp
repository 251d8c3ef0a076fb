#include "fatmeasure/box_union.hpp"

#include <algorithm>

#include "fatmeasure/errors.hpp"

namespace fatmeasure {

namespace {

struct Item {
  const Box* box;
  unsigned operand;
};

using Tail = std::vector<Interval>;

// Sweeps `items` along `axis` and returns the canonical tails (sides
// axis..dim-1) of the region selected by `keep`.
std::vector<Tail> sweep(std::vector<Item>& items, std::size_t axis, std::size_t dim, const MaskPredicate& keep) {
  std::vector<Tail> out;
  if (items.empty()) return out;

  std::vector<Coord> breaks;
  breaks.reserve(items.size() * 2);
  for (const auto& it : items) {
    breaks.push_back(it.box->side(axis).lo);
    breaks.push_back(it.box->side(axis).hi);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::sort(items.begin(), items.end(),
            [axis](const Item& a, const Item& b) { return a.box->side(axis).lo < b.box->side(axis).lo; });

  const bool last = axis + 1 == dim;
  std::vector<Item> active;
  std::size_t next = 0;

  Coord run_lo, run_hi;
  std::vector<Tail> run_children;
  bool run_open = false;

  auto flush = [&]() {
    if (!run_open) return;
    for (auto& child : run_children) {
      Tail t;
      t.reserve(dim - axis);
      t.push_back({run_lo, run_hi});
      t.insert(t.end(), child.begin(), child.end());
      out.push_back(std::move(t));
    }
    run_open = false;
    run_children.clear();
  };

  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const Coord& p = breaks[k];
    const Coord& q = breaks[k + 1];
    std::erase_if(active, [&](const Item& it) { return !(p < it.box->side(axis).hi); });
    while (next < items.size() && items[next].box->side(axis).lo == p) active.push_back(items[next++]);

    std::vector<Tail> children;
    if (!active.empty()) {
      if (last) {
        Mask m = 0;
        for (const auto& it : active) m |= Mask{1} << it.operand;
        if (keep(m)) children.emplace_back();
      } else {
        std::vector<Item> sub = active;
        children = sweep(sub, axis + 1, dim, keep);
      }
    }

    if (children.empty()) {
      flush();
      continue;
    }
    if (run_open && run_hi == p && run_children == children) {
      run_hi = q;
    } else {
      flush();
      run_open = true;
      run_lo = p;
      run_hi = q;
      run_children = std::move(children);
    }
  }
  flush();
  return out;
}

bool any(Mask m) { return m != 0; }

}  // namespace

BoxUnion combine(std::size_t dim, std::span<const std::span<const Box>> operands, const MaskPredicate& keep) {
  if (operands.size() > 64) throw PreconditionError("combine supports at most 64 operands");
  if (dim == 0) throw PreconditionError("dimension must be positive");
  std::vector<Item> items;
  for (unsigned i = 0; i < operands.size(); ++i) {
    for (const auto& b : operands[i]) {
      if (b.dim() != dim) throw PreconditionError("dimension mismatch");
      if (!b.empty()) items.push_back({&b, i});
    }
  }
  std::vector<Tail> tails = sweep(items, 0, dim, keep);
  std::vector<Box> boxes;
  boxes.reserve(tails.size());
  for (auto& t : tails) boxes.emplace_back(std::move(t));
  return BoxUnion::from_canonical(dim, std::move(boxes));
}

BoxUnion::BoxUnion(std::size_t dim, std::span<const Box> boxes) : dim_(dim) {
  std::span<const Box> ops[] = {boxes};
  *this = combine(dim, ops, any);
}

BoxUnion::BoxUnion(const Box& box) : dim_(box.dim()) {
  if (!box.empty()) boxes_.push_back(box);
}

BoxUnion BoxUnion::from_canonical(std::size_t dim, std::vector<Box> boxes) {
  BoxUnion u(dim);
  u.boxes_ = std::move(boxes);
  return u;
}

Rational BoxUnion::measure() const {
  // Integer numerators over a running common denominator, reusing the
  // temporaries; one canonicalization at the end. Coord::value() rejects
  // unbounded boxes.
  mpz_class numerator(0), denominator(1), num, den, side, t, l;
  for (const auto& b : boxes_) {
    mpz_set_ui(num.get_mpz_t(), 1);
    mpz_set_ui(den.get_mpz_t(), 1);
    for (std::size_t i = 0; i < dim_; ++i) {
      const Rational& lo = b.side(i).lo.value();
      const Rational& hi = b.side(i).hi.value();
      if (mpz_cmp(lo.get_den_mpz_t(), hi.get_den_mpz_t()) == 0) {
        mpz_sub(side.get_mpz_t(), hi.get_num_mpz_t(), lo.get_num_mpz_t());
        mpz_mul(den.get_mpz_t(), den.get_mpz_t(), hi.get_den_mpz_t());
      } else {
        mpz_mul(side.get_mpz_t(), hi.get_num_mpz_t(), lo.get_den_mpz_t());
        mpz_submul(side.get_mpz_t(), lo.get_num_mpz_t(), hi.get_den_mpz_t());
        mpz_mul(den.get_mpz_t(), den.get_mpz_t(), hi.get_den_mpz_t());
        mpz_mul(den.get_mpz_t(), den.get_mpz_t(), lo.get_den_mpz_t());
      }
      mpz_mul(num.get_mpz_t(), num.get_mpz_t(), side.get_mpz_t());
    }
    if (mpz_cmp(den.get_mpz_t(), denominator.get_mpz_t()) == 0) {
      mpz_add(numerator.get_mpz_t(), numerator.get_mpz_t(), num.get_mpz_t());
      continue;
    }
    if (!mpz_divisible_p(denominator.get_mpz_t(), den.get_mpz_t())) {
      mpz_lcm(l.get_mpz_t(), denominator.get_mpz_t(), den.get_mpz_t());
      mpz_divexact(t.get_mpz_t(), l.get_mpz_t(), denominator.get_mpz_t());
      mpz_mul(numerator.get_mpz_t(), numerator.get_mpz_t(), t.get_mpz_t());
      mpz_swap(denominator.get_mpz_t(), l.get_mpz_t());
    }
    mpz_divexact(t.get_mpz_t(), denominator.get_mpz_t(), den.get_mpz_t());
    mpz_addmul(numerator.get_mpz_t(), num.get_mpz_t(), t.get_mpz_t());
  }
  Rational total(numerator, denominator);
  total.canonicalize();
  return total;
}

bool BoxUnion::bounded() const {
  return std::all_of(boxes_.begin(), boxes_.end(), [](const Box& b) { return b.bounded(); });
}

namespace {

BoxUnion binary(const BoxUnion& a, const BoxUnion& b, bool (*op)(bool, bool)) {
  if (a.dim() != b.dim()) throw PreconditionError("dimension mismatch");
  std::span<const Box> ops[] = {a.boxes(), b.boxes()};
  return combine(a.dim(), ops, [op](Mask m) { return op(m & 1, m & 2); });
}

}  // namespace

BoxUnion BoxUnion::unite(const BoxUnion& other) const {
  return binary(*this, other, [](bool x, bool y) { return x || y; });
}

BoxUnion BoxUnion::intersect(const BoxUnion& other) const {
  return binary(*this, other, [](bool x, bool y) { return x && y; });
}

BoxUnion BoxUnion::subtract(const BoxUnion& other) const {
  return binary(*this, other, [](bool x, bool y) { return x && !y; });
}

BoxUnion BoxUnion::intersect(const Box& box) const {
  if (box.dim() != dim_) throw PreconditionError("dimension mismatch");
  std::vector<Box> out;
  for (const auto& b : boxes_) {
    Box c = b.intersect(box);
    if (!c.empty()) out.push_back(std::move(c));
  }
  // Clipping by one box can leave adjacent equal cross-sections unmerged.
  return BoxUnion(dim_, out);
}

BoxUnion BoxUnion::translate(std::span<const Rational> shift) const {
  std::vector<Box> out;
  out.reserve(boxes_.size());
  for (const auto& b : boxes_) out.push_back(b.translate(shift));
  return from_canonical(dim_, std::move(out));
}

bool BoxUnion::contains(std::span<const Rational> point) const {
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(point); });
}

bool BoxUnion::pairwise_disjoint() const {
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes_.size(); ++j) {
      if (!boxes_[i].intersect(boxes_[j]).empty()) return false;
    }
  }
  return true;
}

Box BoxUnion::bounding_box() const {
  if (boxes_.empty()) return Box(Point(dim_, Rational(0)), Point(dim_, Rational(0)));
  std::vector<Interval> sides(boxes_.front().sides().begin(), boxes_.front().sides().end());
  for (const auto& b : boxes_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      sides[i].lo = std::min(sides[i].lo, b.side(i).lo);
      sides[i].hi = std::max(sides[i].hi, b.side(i).hi);
    }
  }
  return Box(std::move(sides));
}

TileReport tile_check(const Box& base, const std::vector<Rational>& q, std::size_t max_tiles) {
  if (!base.bounded() || base.empty()) throw PreconditionError("tile_check needs a bounded base box with nonempty interior");
  if (q.size() != base.dim()) throw PreconditionError("dimension mismatch between base and q");
  for (const auto& qi : q) {
    if (sgn(qi) <= 0) throw PreconditionError("tile_check scale factors must be positive");
  }
  const std::size_t d = base.dim();
  TileReport rep;
  rep.base = base;
  rep.q = q;

  Point lo(d), scaled_hi(d), cell(d);
  std::vector<unsigned long> scaled_steps(d), base_steps(d);
  double tiles = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = base.side(i).lo.value();
    Rational side = base.side(i).length();
    scaled_hi[i] = lo[i] + q[i] * side;
    // q_i = n_i / m_i: the refinement cuts the base side into m_i pieces.
    cell[i] = side / Rational(q[i].get_den());
    if (q[i].get_num() > max_tiles || q[i].get_den() > max_tiles) {
      throw BudgetError("tile_check: too many refinement tiles");
    }
    scaled_steps[i] = q[i].get_num().get_ui();
    base_steps[i] = q[i].get_den().get_ui();
    tiles *= static_cast<double>(scaled_steps[i]) + static_cast<double>(base_steps[i]);
  }
  if (tiles > static_cast<double>(max_tiles)) throw BudgetError("tile_check: too many refinement tiles");

  rep.scaled = Box(lo, scaled_hi);
  Point cell_hi = lo;
  for (std::size_t i = 0; i < d; ++i) cell_hi[i] += cell[i];
  rep.refinement = Box(lo, cell_hi);

  auto tile = [&](const std::vector<unsigned long>& steps) {
    std::vector<Box> out;
    std::vector<unsigned long> idx(d, 0);
    while (true) {
      Point shift(d);
      for (std::size_t i = 0; i < d; ++i) shift[i] = cell[i] * Rational(idx[i]);
      out.push_back(rep.refinement.translate(shift));
      std::size_t axis = 0;
      while (axis < d && ++idx[axis] == steps[axis]) idx[axis++] = 0;
      if (axis == d) break;
    }
    return out;
  };

  std::vector<Box> scaled_tiles = tile(scaled_steps);
  std::vector<Box> base_tiles = tile(base_steps);
  rep.scaled_count = scaled_tiles.size();
  rep.base_count = base_tiles.size();

  Rational cell_volume = rep.refinement.volume();
  rep.scaled_measure = rep.scaled.volume();
  rep.counted_measure = cell_volume * Rational(static_cast<unsigned long>(rep.scaled_count));
  rep.base_measure = base.volume();
  rep.base_counted_measure = cell_volume * Rational(static_cast<unsigned long>(rep.base_count));

  BoxUnion scaled_union(d, scaled_tiles);
  BoxUnion base_union(d, base_tiles);
  // Exact tiling: the translates reassemble the box, and their volumes add up
  // to the union's measure (no overlap).
  rep.tiling_exact = scaled_union == BoxUnion(rep.scaled) && base_union == BoxUnion(base) &&
                     scaled_union.measure() == rep.counted_measure &&
                     base_union.measure() == rep.base_counted_measure;
  rep.ok = rep.tiling_exact && rep.scaled_measure == rep.counted_measure &&
           rep.base_measure == rep.base_counted_measure;
  return rep;
}

}  // namespace fatmeasure
