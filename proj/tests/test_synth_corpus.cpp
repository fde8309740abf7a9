#include <cmath>
#include <set>

#include "helpers.hpp"
#include "tabmine/evaluator.hpp"
#include "tabmine/pattern_graph.hpp"
#include "tabmine/synth_corpus.hpp"
#include "tabmine/wire.hpp"

using namespace tabmine;
using testing::error_code_of;

namespace {

std::string serialize(const Corpus& c) {
  std::string out;
  for (const auto& d : c.documents) out += wire::dump(wire::to_json(d));
  for (const auto& g : c.ground_truth) out += wire::dump(wire::to_json(g));
  for (const auto& p : c.class_patterns) out += wire::dump(wire::to_json(p));
  return out;
}

}  // namespace

TEST_CASE("same seed, same corpus") {
  CorpusSpec spec;
  spec.seed = 77;
  spec.n_docs = 5;
  spec.char_noise_rate = 0.1;
  spec.multiline_rate = 0.2;
  CHECK(serialize(generate(spec)) == serialize(generate(spec)));
  CorpusSpec other = spec;
  other.seed = 78;
  CHECK(serialize(generate(spec)) != serialize(generate(other)));
}

TEST_CASE("noise leaves geometry and item count unchanged") {
  CorpusSpec spec;
  spec.seed = 9;
  spec.n_docs = 4;
  const Corpus clean = generate(spec);
  spec.char_noise_rate = 0.25;
  const Corpus noisy = generate(spec);
  for (std::size_t d = 0; d < clean.documents.size(); ++d) {
    CHECK(clean.ground_truth[d] == noisy.ground_truth[d]);
    REQUIRE(clean.documents[d].tokens.size() == noisy.documents[d].tokens.size());
    for (std::size_t t = 0; t < clean.documents[d].tokens.size(); ++t) {
      CHECK(clean.documents[d].tokens[t].box == noisy.documents[d].tokens[t].box);
    }
  }
}

TEST_CASE("without jitter the items tile a regular grid") {
  CorpusSpec spec;
  spec.seed = 1;
  spec.n_docs = 1;
  spec.items_min = 3;
  spec.items_max = 3;
  spec.jitter_px = 0;
  const Corpus c = generate(spec);
  const auto& items = c.ground_truth[0].items;
  REQUIRE(items.size() == 3);
  const int pitch = items[1][0].top - items[0][0].top;
  CHECK(pitch > 0);
  for (std::size_t r = 0; r < items.size(); ++r) {
    REQUIRE(items[r].size() == items[0].size());
    for (std::size_t k = 0; k < items[r].size(); ++k) {
      CHECK(items[r][k].left == items[0][k].left);
      CHECK(items[r][k].top == items[0][k].top + static_cast<int>(r) * pitch);
      CHECK(items[r][k].height() == items[0][k].height());
    }
  }
}

TEST_CASE("noise rate is binomial per character") {
  const std::string text(100, 'x');
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::string noisy = apply_char_noise(text, 0.2, rng);
    REQUIRE(noisy.size() == text.size());
    int changed = 0;
    for (std::size_t i = 0; i < text.size(); ++i) changed += noisy[i] != text[i];
    // Each run: within 3 sigma of n p = 20, sigma = sqrt(100 * 0.2 * 0.8) = 4.
    CHECK(std::abs(changed - 20) <= 12);
    sum += changed;
    sum_sq += changed * changed;
  }
  const double mean = sum / 100.0;
  CHECK(std::abs(mean - 20.0) <= 3.0 * 4.0 / 10.0);
  const double var = sum_sq / 100.0 - mean * mean;
  CHECK(var > 4.0);
  CHECK(var < 36.0);

  std::mt19937_64 rng2(3);
  CHECK(apply_char_noise("0O1l5S8B", 1.0, rng2) == "O0l1S5B8");
  std::mt19937_64 rng4(3);
  for (char ch : apply_char_noise("xyz", 1.0, rng4)) CHECK(std::string(".:;").find(ch) != std::string::npos);
  std::mt19937_64 rng3(3);
  CHECK(apply_char_noise("abc", 0.0, rng3) == "abc");
}

TEST_CASE("corpus statistics follow the spec") {
  CorpusSpec spec;
  spec.seed = 40;
  spec.n_docs = 12;
  spec.n_classes = 3;
  spec.items_min = 4;
  spec.items_max = 6;
  const Corpus c = generate(spec);
  REQUIRE(c.documents.size() == 12);
  CHECK(c.class_patterns.size() == 3);
  std::set<std::string> ids;
  for (std::size_t d = 0; d < 12; ++d) {
    ids.insert(c.documents[d].doc_id);
    CHECK(c.doc_class[d] == static_cast<int>(d % 3));
    CHECK(c.ground_truth[d].doc_id == c.documents[d].doc_id);
    const auto n = c.ground_truth[d].items.size();
    CHECK(n >= 4);
    CHECK(n <= 6);
    for (const auto& item : c.ground_truth[d].items) CHECK(item.size() == 5);  // key columns
    CHECK_NOTHROW(validate(c.documents[d]));
  }
  CHECK(ids.size() == 12);
  CHECK(c.documents[0].doc_id == "doc_0000");
  for (int k = 0; k < 3; ++k) CHECK(c.class_patterns[k].doc_id == c.documents[k].doc_id);
}

TEST_CASE("layouts and zones") {
  for (Zone zone : {Zone::header, Zone::body, Zone::footer}) {
    for (LayoutMode layout : {LayoutMode::linear, LayoutMode::zigzag}) {
      CorpusSpec spec;
      spec.seed = 15;
      spec.n_docs = 2;
      spec.zone = zone;
      spec.layout = layout;
      spec.multiline_rate = 0.3;
      const Corpus c = generate(spec);
      CHECK(c.zone == zone);
      CHECK(c.class_patterns[0].zone == zone);
      for (std::size_t d = 0; d < c.documents.size(); ++d) {
        // Every ground-truth box is covered by tokens of the document.
        for (const auto& item : c.ground_truth[d].items) {
          for (const BBox& box : item) {
            bool covered = false;
            for (const auto& t : c.documents[d].tokens) covered |= contains_center(box, t.box);
            CHECK(covered);
          }
        }
      }
      if (layout == LayoutMode::zigzag) {
        const auto& item = c.ground_truth[0].items[0];
        CHECK(item[1].top > item[0].bottom);  // second column one line lower
      }
    }
  }
}

TEST_CASE("spec parsing and validation") {
  const CorpusSpec s = parse_corpus_spec(R"({"seed": 5, "n_docs": 3, "items_per_doc": [2, 4],
      "columns": [{"label": "date", "generator": "date"},
                  {"label": "price", "generator": "price", "key": false}],
      "zone": "footer", "layout": "zigzag", "char_noise_rate": 0.05})");
  CHECK(s.seed == 5);
  CHECK(s.items_min == 2);
  CHECK(s.items_max == 4);
  REQUIRE(s.columns.size() == 2);
  CHECK_FALSE(s.columns[1].key);
  CHECK(s.zone == Zone::footer);
  CHECK(s.layout == LayoutMode::zigzag);

  CHECK(error_code_of([] { parse_corpus_spec("{}"); }) == ErrorCode::schema);
  CHECK(error_code_of([] { parse_corpus_spec(R"({"seed":1,"n_docs":1,"colour":1})"); }) ==
        ErrorCode::schema);
  CHECK(error_code_of([] { parse_corpus_spec(R"({"seed":1,"n_docs":1,"jitter_px":99})"); }) ==
        ErrorCode::schema);
  CHECK(error_code_of([] { parse_corpus_spec(R"({"seed":1,"n_docs":1,"char_noise_rate":2})"); }) ==
        ErrorCode::schema);

  CorpusSpec crowded;
  crowded.items_min = 200;
  crowded.items_max = 200;
  CHECK(error_code_of([&] { generate(crowded); }) == ErrorCode::overflow);
}

TEST_CASE("saved corpus layout") {
  testing::TempDir tmp("corpus");
  CorpusSpec spec;
  spec.seed = 3;
  spec.n_docs = 4;
  spec.n_classes = 2;
  const Corpus c = generate(spec);
  save_corpus(c, tmp.path());
  CHECK(load_document(tmp / "docs/doc_0001.json") == c.documents[1]);
  CHECK(load_ground_truth(tmp / "gt/doc_0003.json") == c.ground_truth[3]);
  CHECK(load_selection(tmp / "patterns/class_1.json") == c.class_patterns[1]);
  const auto manifest = wire::parse(read_text_file(tmp / "corpus.json"), "manifest");
  CHECK(manifest["zone"] == "body");
  CHECK(manifest["classes"]["class_1"] == wire::json::array({"doc_0001", "doc_0003"}));
}

TEST_CASE("clean key cells carry their column label") {
  CorpusSpec spec;
  spec.seed = 1;
  spec.n_docs = 120;
  spec.multiline_rate = 0.3;
  spec.columns = {{LabelName::date, ValueGenerator::date, true},
                  {LabelName::code, ValueGenerator::code, true},
                  {LabelName::description, ValueGenerator::description, true},
                  {LabelName::quantity, ValueGenerator::quantity, true},
                  {LabelName::percentage, ValueGenerator::percentage, true},
                  {LabelName::price, ValueGenerator::price, true}};
  const Corpus c = generate(spec);
  int mismatches = 0;
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    const PatternBuild b = build_pattern(self_pattern(c.ground_truth[d], c.zone), c.documents[d]);
    for (const auto& item : c.ground_truth[d].items) {
      const PatternSelection cells{c.documents[d].doc_id, c.zone, item};
      const auto fields = fields_from_selection(cells, b.fields);
      REQUIRE(fields.size() == spec.columns.size());
      for (std::size_t k = 0; k < fields.size(); ++k) {
        mismatches += fields[k].features.label.name != spec.columns[k].label;
      }
    }
  }
  CHECK(mismatches == 0);
}
