#include "tabmine/spatial_relations.hpp"

#include <algorithm>

#include "tabmine/errors.hpp"

namespace tabmine {

std::string_view to_string(HPred p) {
  switch (p) {
    case HPred::left: return "left";
    case HPred::h_overlap: return "h_overlap";
    case HPred::right: return "right";
  }
  return "h_overlap";
}

std::string_view to_string(VPred p) {
  switch (p) {
    case VPred::above: return "above";
    case VPred::v_overlap: return "v_overlap";
    case VPred::below: return "below";
  }
  return "v_overlap";
}

Relation Relation::converse() const {
  Relation r = *this;
  if (hpred == HPred::left) r.hpred = HPred::right;
  if (hpred == HPred::right) r.hpred = HPred::left;
  if (vpred == VPred::above) r.vpred = VPred::below;
  if (vpred == VPred::below) r.vpred = VPred::above;
  return r;
}

std::string Relation::to_string() const {
  return std::string(tabmine::to_string(hpred)) + "," + std::string(tabmine::to_string(vpred)) +
         "," + std::to_string(k1) + "," + std::to_string(k2);
}

std::pair<HPred, VPred> base_predicates(const BBox& a, const BBox& b) {
  HPred h = HPred::h_overlap;
  if (b.right < a.left) h = HPred::left;
  else if (b.left > a.right) h = HPred::right;
  VPred v = VPred::v_overlap;
  if (b.bottom < a.top) v = VPred::above;
  else if (b.top > a.bottom) v = VPred::below;
  return {h, v};
}

namespace {

// Closed-interval overlap; touching intervals overlap.
bool overlaps(int lo1, int hi1, int lo2, int hi2) { return lo1 <= hi2 && lo2 <= hi1; }

// Number of boxes strictly between `a` and `b` along x that also overlap both
// of them along y. Assumes a and b are disjoint along x.
int count_between_x(std::span<const BBox> all, std::size_t a, std::size_t b) {
  const BBox& first = all[a].right < all[b].left ? all[a] : all[b];
  const BBox& second = all[a].right < all[b].left ? all[b] : all[a];
  int n = 0;
  for (std::size_t c = 0; c < all.size(); ++c) {
    if (c == a || c == b) continue;
    const BBox& m = all[c];
    if (m.left > first.right && m.right < second.left &&
        overlaps(m.top, m.bottom, all[a].top, all[a].bottom) &&
        overlaps(m.top, m.bottom, all[b].top, all[b].bottom)) {
      ++n;
    }
  }
  return n;
}

int count_between_y(std::span<const BBox> all, std::size_t a, std::size_t b) {
  const BBox& first = all[a].bottom < all[b].top ? all[a] : all[b];
  const BBox& second = all[a].bottom < all[b].top ? all[b] : all[a];
  int n = 0;
  for (std::size_t c = 0; c < all.size(); ++c) {
    if (c == a || c == b) continue;
    const BBox& m = all[c];
    if (m.top > first.bottom && m.bottom < second.top &&
        overlaps(m.left, m.right, all[a].left, all[a].right) &&
        overlaps(m.left, m.right, all[b].left, all[b].right)) {
      ++n;
    }
  }
  return n;
}

}  // namespace

std::pair<int, int> neighborhood_levels(std::span<const BBox> all, std::size_t a,
                                        std::size_t b) {
  const auto [h, v] = base_predicates(all[a], all[b]);
  const int k1 = h == HPred::h_overlap ? 0 : count_between_x(all, a, b);
  const int k2 = v == VPred::v_overlap ? 0 : count_between_y(all, a, b);
  return {k1, k2};
}

Relation relation(std::span<const BBox> all, std::size_t a, std::size_t b) {
  const auto [h, v] = base_predicates(all[a], all[b]);
  const auto [k1, k2] = neighborhood_levels(all, a, b);
  return {h, v, k1, k2};
}

namespace {

std::vector<BBox> boxes_of(std::span<const Field> all) {
  std::vector<BBox> out;
  out.reserve(all.size());
  for (const auto& f : all) out.push_back(f.box());
  return out;
}

std::size_t index_in(const Field& f, std::span<const Field> all) {
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (&all[i] == &f || all[i].field_id == f.field_id) return i;
  }
  throw Error(ErrorCode::precondition, "field " + std::to_string(f.field_id) + " is not in the set");
}

}  // namespace

std::pair<int, int> neighborhood_levels(const Field& a, const Field& b,
                                        std::span<const Field> all) {
  const auto boxes = boxes_of(all);
  const std::size_t ia = index_in(a, all);
  const std::size_t ib = index_in(b, all);
  if (ia == ib) throw Error(ErrorCode::precondition, "neighborhood_levels: a == b");
  return neighborhood_levels(boxes, ia, ib);
}

Relation relation(const Field& a, const Field& b, std::span<const Field> all) {
  const auto boxes = boxes_of(all);
  return relation(boxes, index_in(a, all), index_in(b, all));
}

}  // namespace tabmine
