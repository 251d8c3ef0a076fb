#include "fatmeasure/packing.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

#include "fatmeasure/box_union.hpp"
#include "fatmeasure/errors.hpp"

namespace fatmeasure {

Rational CubeFamily::total_volume() const {
  Rational v(0);
  for (const auto& a : sides) v += power(a, static_cast<long>(dim));
  return v;
}

RoundingReport round_to_dyadic(const std::vector<Rational>& sides, std::size_t dim) {
  if (dim == 0) throw PreconditionError("dimension must be positive");
  RoundingReport r;
  r.rounded_volume = 0;
  r.input_volume = 0;
  for (const auto& a : sides) {
    if (a <= 0) throw PreconditionError("cube sides must be positive");
    long k = floor_log2(a);
    r.rounded.push_back({k, pow2(k)});
    r.rounded_volume += pow2(k * static_cast<long>(dim));
    r.input_volume += power(a, static_cast<long>(dim));
  }
  r.volume_bound = r.rounded_volume >= pow2(-static_cast<long>(dim)) * r.input_volume;
  return r;
}

MergeResult merge_dyadic(const std::vector<long>& levels, std::size_t dim) {
  if (dim == 0 || dim > 16) throw PreconditionError("dimension must be in 1..16");
  const std::size_t group = std::size_t{1} << dim;
  std::map<long, std::vector<std::size_t>> by_level;  // ids kept sorted
  for (std::size_t id = 0; id < levels.size(); ++id) by_level[levels[id]].push_back(id);

  MergeResult out;
  std::size_t next_id = levels.size();
  while (true) {
    auto it = std::find_if(by_level.begin(), by_level.end(), [&](const auto& kv) { return kv.second.size() >= group; });
    if (it == by_level.end()) break;
    const long k = it->first;
    std::vector<std::size_t>& ids = it->second;
    MergeStep step;
    step.level = k;
    step.parts.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(group));
    ids.erase(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(group));
    step.result = next_id++;
    for (std::size_t b = 0; b < group; ++b) {
      Point offset(dim);
      for (std::size_t i = 0; i < dim; ++i) offset[i] = ((b >> (dim - 1 - i)) & 1) ? pow2(k) : Rational(0);
      step.offsets.push_back(std::move(offset));
    }
    by_level[k + 1].push_back(step.result);  // new ids exceed all existing ones
    out.tree.push_back(std::move(step));
  }
  out.volume = 0;
  for (const auto& [k, ids] : by_level) {
    for (auto id : ids) {
      out.final_family.push_back({id, k});
      out.volume += pow2(k * static_cast<long>(dim));
    }
  }
  std::sort(out.final_family.begin(), out.final_family.end(),
            [](const DyadicCube& a, const DyadicCube& b) { return a.id < b.id; });
  return out;
}

namespace {

BoxUnion placed_union(const CubeFamily& family, const std::vector<Placement>& placements) {
  std::vector<Box> boxes;
  for (const auto& p : placements) boxes.push_back(Box::cube(p.translation, family.sides.at(p.j)));
  return BoxUnion(family.dim, boxes);
}

}  // namespace

PackingLayout pack_cover(const CubeFamily& family, const Rational& target_side, const Rational& alpha) {
  const std::size_t d = family.dim;
  if (alpha <= 0) throw PreconditionError("scale must be positive");
  if (target_side <= 0) throw PreconditionError("target side must be positive");
  std::vector<Rational> scaled;
  for (const auto& a : family.sides) scaled.push_back(a / alpha);
  RoundingReport rounding = round_to_dyadic(scaled, d);
  if (!rounding.volume_bound) throw std::logic_error("dyadic rounding lost more than a factor 2^d");
  if (rounding.input_volume < 1) {
    throw PreconditionError("hypothesis fails: sum of (a_j/alpha)^d = " + to_string(rounding.input_volume) + " < 1");
  }

  std::vector<long> levels;
  for (const auto& r : rounding.rounded) levels.push_back(r.k);
  MergeResult merged = merge_dyadic(levels, d);
  if (merged.volume != rounding.rounded_volume) throw std::logic_error("merging changed the total volume");

  std::optional<DyadicCube> pick;
  for (const auto& c : merged.final_family) {
    if (pow2(c.k) < target_side) continue;
    if (!pick || c.k < pick->k) pick = c;  // family is in id order, so ties keep the lowest id
  }
  if (!pick) {
    if (target_side <= Rational(1, 2)) throw std::logic_error("no merged cube of side 1/2 despite the volume hypothesis");
    throw PreconditionError("no merged cube reaches side " + to_string(target_side));
  }

  std::map<std::size_t, const MergeStep*> step_of;
  for (const auto& st : merged.tree) step_of[st.result] = &st;

  PackingLayout layout;
  layout.scale = alpha;
  layout.scaled_volume = rounding.input_volume;
  layout.selected = pick->id;
  layout.merge_tree = merged.tree;
  layout.target = Box::cube(Point(d, Rational(0)), alpha * target_side);
  // Parts that miss the target are not unfolded.
  const Box scaled_target = Box::cube(Point(d, Rational(0)), target_side);
  std::vector<std::pair<std::size_t, Point>> stack{{pick->id, Point(d, Rational(0))}};
  while (!stack.empty()) {
    auto [id, at] = std::move(stack.back());
    stack.pop_back();
    if (id < family.sides.size()) {
      Point t = at;
      for (auto& x : t) x *= alpha;
      layout.placements.push_back({id, std::move(t)});
      continue;
    }
    const MergeStep& st = *step_of.at(id);
    for (std::size_t b = st.parts.size(); b-- > 0;) {
      Point child = at;
      for (std::size_t i = 0; i < d; ++i) child[i] += st.offsets[b][i];
      if (Box::cube(child, pow2(st.level)).intersect(scaled_target).empty()) continue;
      stack.emplace_back(st.parts[b], std::move(child));
    }
  }
  std::sort(layout.placements.begin(), layout.placements.end(),
            [](const Placement& a, const Placement& b) { return a.j < b.j; });
  // Closed cubes cover the closed target whenever the half-open ones cover
  // the half-open target.
  layout.verified = placed_union(family, layout.placements).includes(BoxUnion(layout.target));
  if (!layout.verified) throw std::logic_error("packing layout failed its coverage check");
  return layout;
}

bool verify_layout(const CubeFamily& family, const PackingLayout& layout) {
  std::vector<bool> used(family.sides.size(), false);
  for (const auto& p : layout.placements) {
    if (p.j >= family.sides.size() || used[p.j] || p.translation.size() != family.dim) return false;
    used[p.j] = true;
  }
  if (layout.target.dim() != family.dim) return false;
  return placed_union(family, layout.placements).includes(BoxUnion(layout.target));
}

}  // namespace fatmeasure
