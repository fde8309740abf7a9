#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "tabmine/evaluator.hpp"
#include "tabmine/pipeline.hpp"
#include "tabmine/synth_corpus.hpp"
#include "tabmine/wire.hpp"

using namespace tabmine;
using testing::TempDir;

namespace {

struct Run {
  int status = 0;
  std::string out;
};

// Runs the command-line tool with stdout and stderr captured.
Run cli(const std::string& args, const TempDir& tmp) {
  const auto log = tmp / "cli.log";
  const std::string cmd = std::string("\"") + TABMINE_CLI + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_text_file(log);
  return r;
}

Corpus small_corpus(int n_docs, std::uint64_t seed = 14) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.n_docs = n_docs;
  return generate(spec);
}

}  // namespace

TEST_CASE("pattern ids and paths") {
  CHECK(pattern_id_from_path("a/b/class_3.json") == "class_3");
  CHECK(pattern_id_from_path("x.sel.json") == "x");
  CHECK(result_path("out", "doc_0001") == std::filesystem::path("out/doc_0001.result.json"));
  CHECK(testing::error_code_of([] { json_files("/nonexistent/dir"); }) == ErrorCode::io);
}

TEST_CASE("parallel extraction matches sequential extraction") {
  const Corpus c = small_corpus(8);
  RunOptions opt;
  const Arg q = build_pattern_graph(c.class_patterns[0], c.documents[0], opt.pattern);
  const auto one = extract_all(q, "class_0", c.documents, opt);
  opt.jobs = 4;
  const auto four = extract_all(q, "class_0", c.documents, opt);
  CHECK(one == four);
  for (std::size_t d = 0; d < one.size(); ++d) {
    CHECK(one[d].doc_id == c.documents[d].doc_id);
    CHECK(one[d].pattern_id == "class_0");
  }
}

TEST_CASE("extract on a single document with its own pattern") {
  TempDir tmp("cli_self");
  const Corpus c = small_corpus(1);
  save_corpus(c, tmp.path());
  const Run r = cli("extract --docs " + (tmp / "docs").string() + " --pattern " +
                        (tmp / "patterns/class_0.json").string() + " --out " +
                        (tmp / "out").string(),
                    tmp);
  REQUIRE(r.status == 0);
  const TableResult res = load_result(tmp / "out/doc_0000.result.json");
  REQUIRE_FALSE(res.items.empty());
  CHECK(res.items.front().S == 1.0);
}

TEST_CASE("command-line errors exit nonzero with a diagnostic") {
  TempDir tmp("cli_err");
  const Corpus c = small_corpus(1);
  save_corpus(c, tmp.path());
  Run r = cli("extract --docs " + (tmp / "docs").string() + " --pattern " +
                  (tmp / "patterns/missing.json").string() + " --out " + (tmp / "out").string(),
              tmp);
  CHECK(r.status != 0);
  CHECK(r.out.find("io_error") != std::string::npos);

  write_text_file(tmp / "bad.json", "{\"doc_id\": 3}");
  r = cli("extract --docs " + (tmp / "docs").string() + " --pattern " +
              (tmp / "bad.json").string(),
          tmp);
  CHECK(r.status != 0);
  CHECK(r.out.find("schema_error") != std::string::npos);

  r = cli("extract --docs " + (tmp / "docs").string() + " --pattern " +
              (tmp / "patterns/class_0.json").string() + " --alpha 3",
          tmp);
  CHECK(r.status != 0);

  r = cli("frobnicate", tmp);
  CHECK(r.status != 0);

  write_text_file(tmp / "empty.json", "{}");
  r = cli("gen --config " + (tmp / "empty.json").string() + " --out " + (tmp / "g").string(), tmp);
  CHECK(r.status != 0);
  CHECK(r.out.find("seed") != std::string::npos);
}

TEST_CASE("command-line extraction equals library calls") {
  TempDir tmp("cli_equiv");
  const Corpus c = small_corpus(10);
  save_corpus(c, tmp.path());
  const Run r = cli("extract --jobs 3 --docs " + (tmp / "docs").string() + " --pattern " +
                        (tmp / "patterns/class_0.json").string() + " --out " +
                        (tmp / "out").string(),
                    tmp);
  REQUIRE(r.status == 0);
  RunOptions opt;
  const Arg q = build_pattern_graph(c.class_patterns[0], c.documents[0], opt.pattern);
  const auto expected = extract_all(q, "class_0", c.documents, opt);
  CHECK(json_files(tmp / "out").size() == 10);
  for (const auto& res : expected) {
    const auto path = result_path(tmp / "out", res.doc_id);
    CHECK(read_text_file(path) == wire::dump(wire::to_json(res)));
    CHECK(load_result(path) == res);
  }
}

TEST_CASE("weights and formation flags reach the engine") {
  TempDir tmp("cli_flags");
  const Corpus c = small_corpus(2);
  save_corpus(c, tmp.path());
  const Run r = cli("extract --alpha 1 --threshold 0.95 --gap 11 --no-line-merge --taxonomy " +
                        (testing::source_dir() / "data/taxonomy.json").string() + " --docs " +
                        (tmp / "docs").string() + " --pattern " +
                        (tmp / "patterns/class_0.json").string() + " --out " +
                        (tmp / "out").string(),
                    tmp);
  REQUIRE(r.status == 0);
  RunOptions opt;
  opt.weights.alpha = 1.0;
  opt.weights.accept_threshold = 0.95;
  opt.pattern.gap = 11;
  opt.pattern.line_merge = false;
  const Arg q = build_pattern_graph(c.class_patterns[0], c.documents[0], opt.pattern);
  for (const auto& doc : c.documents) {
    CHECK(load_result(result_path(tmp / "out", doc.doc_id)) ==
          extract_one(q, "class_0", doc, opt));
  }
}

TEST_CASE("eval prints the zone table") {
  TempDir tmp("cli_eval");
  const Corpus c = small_corpus(3);
  save_corpus(c, tmp.path());
  std::filesystem::create_directories(tmp / "perfect");
  std::filesystem::create_directories(tmp / "empty");
  std::filesystem::create_directories(tmp / "partial");
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    TableResult perfect{c.documents[d].doc_id, "gt", 1.0, {}};
    for (const auto& item : c.ground_truth[d].items) {
      MinedItem m;
      m.boxes = item;
      m.S = 1.0;
      perfect.items.push_back(m);
    }
    save_result(perfect, result_path(tmp / "perfect", perfect.doc_id));
    save_result({c.documents[d].doc_id, "gt", 0.0, {}},
                result_path(tmp / "empty", perfect.doc_id));
  }
  Run r = cli("eval --gt " + (tmp / "gt").string() + " --results " + (tmp / "perfect").string() +
                  " --data " + tmp.path().string(),
              tmp);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("Eval. 1 (lab patterns)") != std::string::npos);
  CHECK(r.out.find("100.0") != std::string::npos);

  r = cli("eval --client-patterns --zone footer --gt " + (tmp / "gt").string() + " --results " +
              (tmp / "empty").string(),
          tmp);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("Eval. 2 (client patterns)") != std::string::npos);
  CHECK(r.out.find("0.0") != std::string::npos);

  // One document with 5 of its 7 items found.
  GroundTruthTable gt{"seven", {}};
  TableResult found{"seven", "p", 1.0, {}};
  for (int k = 0; k < 7; ++k) {
    gt.items.push_back({{10, 10 + 40 * k, 90, 34 + 40 * k}});
    if (k < 5) found.items.push_back(MinedItem{{}, {}, 1.0, gt.items.back()});
  }
  save_ground_truth(gt, tmp / "partial/gt.json");
  save_result(found, tmp / "partial/res.json");
  r = cli("eval --gt " + (tmp / "partial/gt.json").string() + " --results " +
              (tmp / "partial/res.json").string(),
          tmp);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("71.4") != std::string::npos);

  r = cli("eval --gt " + (tmp / "gt").string() + " --results " +
              (tmp / "partial/res.json").string(),
          tmp);
  CHECK(r.status != 0);
  CHECK(r.out.find("unmatched_docs") != std::string::npos);
}

TEST_CASE("gen writes a deterministic corpus") {
  TempDir tmp("cli_gen");
  write_text_file(tmp / "spec.json", R"({"seed": 8, "n_docs": 4, "n_classes": 2})");
  REQUIRE(cli("gen --config " + (tmp / "spec.json").string() + " --out " + (tmp / "a").string(),
              tmp)
              .status == 0);
  REQUIRE(cli("gen --config " + (tmp / "spec.json").string() + " --out " + (tmp / "b").string(),
              tmp)
              .status == 0);
  CHECK(json_files(tmp / "a/docs").size() == 4);
  CHECK(json_files(tmp / "a/patterns").size() == 2);
  for (const auto& p : json_files(tmp / "a/docs")) {
    CHECK(read_text_file(p) == read_text_file(tmp / "b/docs" / p.filename()));
  }
  REQUIRE(cli("gen --seed 8 --n-docs 4 --out " + (tmp / "c").string(), tmp).status == 0);
  CHECK(json_files(tmp / "c/docs").size() == 4);
}
