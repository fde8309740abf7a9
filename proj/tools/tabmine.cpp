#include <csignal>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tabmine/errors.hpp"
#include "tabmine/evaluator.hpp"
#include "tabmine/pipeline.hpp"
#include "tabmine/service.hpp"
#include "tabmine/synth_corpus.hpp"
#include "tabmine/wire.hpp"

namespace fs = std::filesystem;
using namespace tabmine;

namespace {

struct EngineFlags {
  double alpha = ScoreWeights{}.alpha;
  double threshold = ScoreWeights{}.accept_threshold;
  std::optional<int> gap;
  std::string taxonomy;
  bool no_line_merge = false;
  int jobs = 1;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
  cmd->add_option("--alpha", f.alpha, "Edge weight of the matching score")->capture_default_str();
  cmd->add_option("--threshold", f.threshold, "Minimum matching score of a table item")
      ->capture_default_str();
  cmd->add_option("--gap", f.gap, "Intra-field gap in pixels (default: from the selection)");
  cmd->add_option("--taxonomy", f.taxonomy, "Label rules file (default: built-in)");
  cmd->add_flag("--no-line-merge", f.no_line_merge, "Keep multi-line cells as separate fields");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();
}

RunOptions run_options(const EngineFlags& f, std::optional<Taxonomy>& taxonomy) {
  RunOptions opt;
  opt.weights.alpha = f.alpha;
  opt.weights.accept_threshold = f.threshold;
  opt.weights.validate();
  opt.pattern.gap = f.gap;
  opt.pattern.line_merge = !f.no_line_merge;
  if (!f.taxonomy.empty()) {
    taxonomy = Taxonomy::load(f.taxonomy);
    opt.pattern.taxonomy = &*taxonomy;
  }
  if (f.jobs < 1) throw Error(ErrorCode::precondition, "--jobs must be at least 1");
  opt.jobs = f.jobs;
  return opt;
}

int cmd_extract(const EngineFlags& flags, const fs::path& docs_path, const fs::path& pattern_path,
                const fs::path& out_dir) {
  std::optional<Taxonomy> taxonomy;
  const RunOptions opt = run_options(flags, taxonomy);
  const PatternSelection selection = load_selection(pattern_path);
  std::vector<Document> docs;
  for (const auto& p : json_files(docs_path)) docs.push_back(load_document(p));

  const Document* source = nullptr;
  for (const auto& d : docs) {
    if (d.doc_id == selection.doc_id) source = &d;
  }
  if (source == nullptr) {
    throw Error(ErrorCode::not_found,
                "pattern document '" + selection.doc_id + "' is not among the input documents");
  }
  const Arg q = build_pattern_graph(selection, *source, opt.pattern);
  const std::string pattern_id = pattern_id_from_path(pattern_path);

  fs::create_directories(out_dir);
  for (const auto& r : extract_all(q, pattern_id, docs, opt)) {
    save_result(r, result_path(out_dir, r.doc_id));
    std::printf("%s\titems=%zu\tcs=%.4f\n", r.doc_id.c_str(), r.items.size(), r.cs);
  }
  return 0;
}

Zone parse_zone(const std::string& name) {
  if (auto z = zone_from_string(name)) return *z;
  throw Error(ErrorCode::schema, "unknown zone '" + name + "'");
}

std::map<std::string, Zone> corpus_zones(const fs::path& data_dir, Zone fallback,
                                         const std::vector<GroundTruthTable>& gts) {
  Zone zone = fallback;
  if (!data_dir.empty()) {
    const auto manifest = wire::parse(read_text_file(data_dir / "corpus.json"), "corpus.json");
    if (manifest.contains("zone")) zone = parse_zone(manifest["zone"].get<std::string>());
  }
  std::map<std::string, Zone> zones;
  for (const auto& gt : gts) zones[gt.doc_id] = zone;
  return zones;
}

int cmd_eval(const fs::path& gt_path, const fs::path& results_path, const std::string& zone_name,
             const fs::path& data_dir, bool client_patterns) {
  std::vector<GroundTruthTable> gts;
  for (const auto& p : json_files(gt_path)) gts.push_back(load_ground_truth(p));
  std::vector<TableResult> results;
  for (const auto& p : json_files(results_path)) results.push_back(load_result(p));

  const auto zones = corpus_zones(data_dir, parse_zone(zone_name), gts);
  const EvalReport rep = report(gts, results, zones);
  const std::string mode = client_patterns ? "Eval. 2 (client patterns)" : "Eval. 1 (lab patterns)";
  std::fputs(format_report_table({{mode, rep}}).c_str(), stdout);
  return 0;
}

int cmd_gen(const fs::path& config, std::optional<std::uint64_t> seed, std::optional<int> n_docs,
            const fs::path& out_dir) {
  CorpusSpec spec;
  if (!config.empty()) spec = load_corpus_spec(config);
  if (seed) spec.seed = *seed;
  if (n_docs) spec.n_docs = *n_docs;
  spec.validate();
  const Corpus corpus = generate(spec);
  save_corpus(corpus, out_dir);
  std::printf("wrote %zu documents and %zu patterns to %s\n", corpus.documents.size(),
              corpus.class_patterns.size(), out_dir.string().c_str());
  return 0;
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

int cmd_serve(const EngineFlags& flags, const fs::path& data_dir, const std::string& host,
              int port) {
  std::optional<Taxonomy> taxonomy;
  ServiceConfig config{data_dir, run_options(flags, taxonomy)};
  if (!fs::is_directory(data_dir / "docs")) {
    throw Error(ErrorCode::io, "no docs/ directory under " + data_dir.string());
  }
  Service service(config);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::printf("serving %s on http://%s:%d\n", data_dir.string().c_str(), host.c_str(), port);
  std::fflush(stdout);
  const bool clean = service.listen(host, port);
  g_service = nullptr;
  if (!clean) throw Error(ErrorCode::io, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Table mining from document images by pattern-graph matching"};
  app.require_subcommand(1);

  EngineFlags extract_flags;
  std::string docs, pattern, out = "results";
  auto* extract = app.add_subcommand("extract", "Mine the pattern's table in every document");
  add_engine_flags(extract, extract_flags);
  extract->add_option("--docs", docs, "Document file or directory")->required();
  extract->add_option("--pattern", pattern, "Pattern selection file")->required();
  extract->add_option("--out", out, "Output directory for result files")->capture_default_str();

  std::string gt, results, zone = "body", data;
  bool client_patterns = false;
  auto* eval = app.add_subcommand("eval", "Score result files against ground truth");
  eval->add_option("--gt", gt, "Ground-truth file or directory")->required();
  eval->add_option("--results", results, "Result file or directory")->required();
  eval->add_option("--zone", zone, "Zone of every document (header|body|footer)")
      ->capture_default_str();
  eval->add_option("--data", data, "Corpus directory whose corpus.json gives the zone");
  eval->add_flag("--client-patterns", client_patterns,
                 "Label the report as mined from client-drawn patterns");

  std::string config, gen_out = "corpus";
  std::optional<std::uint64_t> seed;
  std::optional<int> n_docs;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic invoice corpus");
  gen->add_option("--config", config, "Corpus spec file");
  gen->add_option("--seed", seed, "Random seed (overrides the spec)");
  gen->add_option("--n-docs", n_docs, "Number of documents (overrides the spec)");
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  EngineFlags serve_flags;
  std::string serve_data, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a corpus directory over HTTP");
  add_engine_flags(serve, serve_flags);
  serve->add_option("--data", serve_data, "Corpus directory (docs/, patterns/, gt/)")->required();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) return cmd_extract(extract_flags, docs, pattern, out);
    if (*eval) return cmd_eval(gt, results, zone, data, client_patterns);
    if (*gen) {
      if (config.empty() && !seed) {
        throw Error(ErrorCode::schema, "gen needs --config or --seed");
      }
      return cmd_gen(config, seed, n_docs, gen_out);
    }
    if (*serve) return cmd_serve(serve_flags, serve_data, host, port);
  } catch (const Error& e) {
    std::fprintf(stderr, "tabmine: %s: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tabmine: %s\n", e.what());
    return 2;
  }
  return 1;
}
