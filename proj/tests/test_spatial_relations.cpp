#include <random>

#include "helpers.hpp"
#include "oracle.hpp"
#include "tabmine/spatial_relations.hpp"
#include "tabmine/synth_corpus.hpp"

using namespace tabmine;

namespace {

std::vector<Field> fields_at(const std::vector<BBox>& boxes) {
  std::vector<Field> out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    Field f;
    f.field_id = static_cast<int>(i);
    f.token_ids = {static_cast<int>(i)};
    f.features.box = boxes[i];
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("base predicates") {
  const BBox a{100, 100, 200, 130};
  CHECK(base_predicates(a, a) == std::pair{HPred::h_overlap, VPred::v_overlap});
  CHECK(base_predicates(a, {300, 102, 380, 128}) == std::pair{HPred::right, VPred::v_overlap});
  // Lower-left diagonal: b.right 90 < a.left 100, b.top 150 > a.bottom 130.
  CHECK(base_predicates(a, {20, 150, 90, 180}) == std::pair{HPred::left, VPred::below});
  // Touching edges overlap.
  CHECK(base_predicates(a, {200, 130, 250, 160}) ==
        std::pair{HPred::h_overlap, VPred::v_overlap});
}

TEST_CASE("neighbourhood levels on a single band") {
  const auto fields = fields_at({{0, 0, 50, 20}, {100, 0, 150, 20}, {200, 0, 250, 20}});
  CHECK(neighborhood_levels(fields[0], fields[1], fields) == std::pair{0, 0});
  CHECK(neighborhood_levels(fields[0], fields[2], fields) == std::pair{1, 0});
  CHECK(relation(fields[0], fields[1], fields) == Relation{HPred::right, VPred::v_overlap, 0, 0});
  CHECK(relation(fields[2], fields[0], fields) == Relation{HPred::left, VPred::v_overlap, 1, 0});
  CHECK(relation(fields[0], fields[2], fields).to_string() == "right,v_overlap,1,0");
}

TEST_CASE("five-field band against brute force") {
  const std::vector<BBox> boxes = {
      {0, 0, 50, 20}, {80, 2, 140, 22}, {170, 0, 220, 20}, {260, 4, 300, 24}, {330, 0, 400, 20}};
  const auto fields = fields_at(boxes);
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      if (a == b) continue;
      const int between = static_cast<int>(a > b ? a - b : b - a) - 1;
      CHECK(neighborhood_levels(fields[a], fields[b], fields).first == between);
    }
  }
}

TEST_CASE("all ordered pairs of a synthetic item match the oracle") {
  CorpusSpec spec;
  spec.seed = 8;
  spec.n_docs = 3;
  const Corpus c = generate(spec);
  for (const auto& gt : c.ground_truth) {
    for (const auto& item : gt.items) {
      for (std::size_t a = 0; a < item.size(); ++a) {
        for (std::size_t b = 0; b < item.size(); ++b) {
          if (a == b) continue;
          CHECK(relation(item, a, b) == oracle::relation(item, a, b));
        }
      }
    }
  }
}

TEST_CASE("random layouts match the oracle and converse is consistent") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> pos(0, 300);
  std::uniform_int_distribution<int> len(5, 60);
  for (int round = 0; round < 60; ++round) {
    std::vector<BBox> boxes;
    for (int i = 0; i < 7; ++i) {
      const int l = pos(rng);
      const int t = pos(rng);
      boxes.push_back({l, t, l + len(rng), t + len(rng)});
    }
    for (std::size_t a = 0; a < boxes.size(); ++a) {
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (a == b) continue;
        const Relation r = relation(boxes, a, b);
        CHECK(r == oracle::relation(boxes, a, b));
        CHECK(relation(boxes, b, a) == r.converse());
        if (r.hpred == HPred::h_overlap) CHECK(r.k1 == 0);
        if (r.vpred == VPred::v_overlap) CHECK(r.k2 == 0);
      }
    }
  }
}

TEST_CASE("field-level calls validate their arguments") {
  const auto fields = fields_at({{0, 0, 50, 20}, {100, 0, 150, 20}});
  Field stranger;
  stranger.field_id = 42;
  CHECK(testing::error_code_of([&] { relation(fields[0], stranger, fields); }) ==
        ErrorCode::precondition);
  CHECK(testing::error_code_of([&] { neighborhood_levels(fields[0], fields[0], fields); }) ==
        ErrorCode::precondition);
}
