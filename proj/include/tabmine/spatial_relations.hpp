#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "tabmine/doc_model.hpp"
#include "tabmine/field_former.hpp"

namespace tabmine {

// Position of the second box relative to the first along each axis.
enum class HPred { left, h_overlap, right };
enum class VPred { above, v_overlap, below };

std::string_view to_string(HPred p);
std::string_view to_string(VPred p);

// Directional predicate pair qualified by neighborhood levels: k1 counts
// intervening fields horizontally, k2 vertically. A level is 0 on an overlap
// axis and for adjacent fields.
struct Relation {
  HPred hpred = HPred::h_overlap;
  VPred vpred = VPred::v_overlap;
  int k1 = 0;
  int k2 = 0;

  bool same_predicates(const Relation& other) const {
    return hpred == other.hpred && vpred == other.vpred;
  }
  Relation converse() const;
  std::string to_string() const;  // "hpred,vpred,k1,k2"

  friend bool operator==(const Relation&, const Relation&) = default;
};

std::pair<HPred, VPred> base_predicates(const BBox& a, const BBox& b);

// Levels between boxes `a` and `b` (indices into `all`).
std::pair<int, int> neighborhood_levels(std::span<const BBox> all, std::size_t a,
                                        std::size_t b);

Relation relation(std::span<const BBox> all, std::size_t a, std::size_t b);

// Field-level conveniences; `a` and `b` must be elements of `all`.
std::pair<int, int> neighborhood_levels(const Field& a, const Field& b,
                                        std::span<const Field> all);
Relation relation(const Field& a, const Field& b, std::span<const Field> all);

}  // namespace tabmine
