#include <random>

#include "helpers.hpp"
#include "oracle.hpp"
#include "tabmine/evaluator.hpp"
#include "tabmine/pipeline.hpp"
#include "tabmine/synth_corpus.hpp"

using namespace tabmine;
using testing::error_code_of;

namespace {

MinedItem item_of(std::vector<BBox> boxes) {
  MinedItem m;
  m.boxes = std::move(boxes);
  return m;
}

// Seven rows of two boxes each.
GroundTruthTable seven_rows() {
  GroundTruthTable gt{"d", {}};
  for (int r = 0; r < 7; ++r) {
    gt.items.push_back({{100, 100 + 50 * r, 200, 124 + 50 * r}, {300, 100 + 50 * r, 380, 124 + 50 * r}});
  }
  return gt;
}

}  // namespace

TEST_CASE("box overlap ratio") {
  CHECK(or1({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(or1({0, 0, 10, 10}, {20, 0, 30, 10}) == 0.0);
  CHECK(or1({0, 0, 10, 10}, {5, 0, 15, 10}) == 0.5);
  CHECK(or1({4, 4, 4, 4}, {4, 4, 4, 4}) == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(0, 40);
  for (int i = 0; i < 100; ++i) {
    BBox a{c(rng), c(rng), 0, 0};
    a.right = a.left + c(rng);
    a.bottom = a.top + c(rng);
    BBox b{c(rng), c(rng), 0, 0};
    b.right = b.left + c(rng);
    b.bottom = b.top + c(rng);
    CHECK(or1(a, b) == doctest::Approx(oracle::or1_pixels(a, b)).epsilon(1e-12));
    CHECK(or1(a, b) == or1(b, a));
  }
}

TEST_CASE("item overlap ratio") {
  const std::vector<BBox> four = {{0, 0, 10, 10}, {20, 0, 30, 10}, {40, 0, 50, 10}, {60, 0, 70, 10}};
  CHECK(or2(four, four) == 1.0);
  CHECK(or2(four, std::vector<BBox>{four[0], four[2]}) == 0.5);
  CHECK(error_code_of([&] { or2(four, std::vector<BBox>{}); }) == ErrorCode::precondition);

  // Partial overlaps where the greedy pairing is also optimal.
  const std::vector<BBox> gt = {{0, 0, 100, 20}, {200, 0, 300, 20}, {400, 0, 500, 20}};
  const std::vector<BBox> found = {{410, 0, 500, 20}, {0, 2, 90, 22}, {230, 0, 320, 20}};
  CHECK(or2(gt, found) == doctest::Approx(oracle::or2_optimal(gt, found)).epsilon(1e-12));
}

TEST_CASE("table evaluation") {
  const GroundTruthTable gt = seven_rows();
  TableResult all{"d", "p", 1.0, {}};
  for (const auto& item : gt.items) all.items.push_back(item_of(item));
  CHECK(eval_table(gt, all) == 1.0);

  TableResult five = all;
  five.items.erase(five.items.begin() + 1);
  five.items.erase(five.items.begin() + 4);
  CHECK(eval_table(gt, five) == doctest::Approx(5.0 / 7.0));

  CHECK(eval_table(gt, TableResult{"d", "p", 0.0, {}}) == 0.0);
  TableResult boxless = all;
  boxless.items[0].boxes.clear();
  CHECK(eval_table(gt, boxless) == doctest::Approx(6.0 / 7.0));

  CHECK(error_code_of([&] { eval_table(gt, TableResult{"other", "p", 0.0, {}}); }) ==
        ErrorCode::doc_mismatch);
}

TEST_CASE("corpus report") {
  const GroundTruthTable a = seven_rows();
  GroundTruthTable b = seven_rows();
  b.doc_id = "e";
  TableResult ra{"d", "p", 1.0, {}};
  for (const auto& item : a.items) ra.items.push_back(item_of(item));
  TableResult rb{"e", "p", 1.0, {}};
  for (std::size_t i = 0; i < b.items.size(); ++i) {
    if (i % 2 == 0) rb.items.push_back(item_of(b.items[i]));
  }
  // Four of seven rows found in e: 4/7.
  const std::vector<GroundTruthTable> gts = {a, b};
  const std::vector<TableResult> results = {rb, ra};
  const EvalReport single = report(std::span(gts).first(1), std::span(results).last(1));
  CHECK(single.overall == 1.0);

  const EvalReport both = report(gts, results, {{"e", Zone::footer}});
  CHECK(both.overall == doctest::Approx((1.0 + 4.0 / 7.0) / 2.0));
  CHECK(both.per_zone.at(Zone::body) == 1.0);
  CHECK(both.per_zone.at(Zone::footer) == doctest::Approx(4.0 / 7.0));
  CHECK(both.per_zone.count(Zone::header) == 0);

  const std::string table = format_report_table({{"Eval. 1", both}});
  CHECK(table.find("Header") != std::string::npos);
  CHECK(table.find("100.0") != std::string::npos);
  CHECK(table.find("78.6") != std::string::npos);

  const std::vector<TableResult> missing = {ra};
  const std::string msg = testing::error_message_of([&] { report(gts, missing); });
  CHECK(error_code_of([&] { report(gts, missing); }) == ErrorCode::unmatched_docs);
  CHECK(msg.find("e") != std::string::npos);
}

TEST_CASE("two documents at 1.0 and 0.5 average to 0.75") {
  EvalCase one{{"a", {{{0, 0, 10, 10}}}}, {"a", "p", 1.0, {item_of({{0, 0, 10, 10}})}}, Zone::body};
  EvalCase half{{"b", {{{0, 0, 10, 10}}, {{0, 20, 10, 30}}}},
                {"b", "p", 1.0, {item_of({{0, 0, 10, 10}})}},
                Zone::body};
  const std::vector<EvalCase> cases = {one, half};
  CHECK(report(cases).overall == 0.75);
}

TEST_CASE("ten-document synthetic report is the mean of its documents") {
  CorpusSpec spec;
  spec.seed = 21;
  spec.n_docs = 10;
  spec.char_noise_rate = 0.1;
  const Corpus c = generate(spec);
  RunOptions opt;
  const Arg q = build_pattern_graph(c.class_patterns[0], c.documents[0], opt.pattern);
  const auto results = extract_all(q, "class_0", c.documents, opt);
  const EvalReport rep = report(c.ground_truth, results);
  double sum = 0.0;
  for (std::size_t d = 0; d < results.size(); ++d) {
    const double v = eval_table(c.ground_truth[d], results[d]);
    CHECK(rep.per_doc[d].second == v);
    sum += v;
  }
  CHECK(rep.overall == doctest::Approx(sum / 10.0).epsilon(1e-12));
}
