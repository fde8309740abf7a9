#include "tabmine/service.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

#include "httplib.h"
#include "tabmine/errors.hpp"
#include "tabmine/evaluator.hpp"
#include "tabmine/wire.hpp"

namespace tabmine {

namespace {

using wire::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::io: return 500;
    case ErrorCode::field_resolution:
    case ErrorCode::precondition:
    case ErrorCode::doc_mismatch:
    case ErrorCode::unmatched_docs: return 422;
    default: return 400;
  }
}

Response ok(json data) {
  return {200, json{{"ok", true}, {"data", std::move(data)}}.dump()};
}

Response failure(ErrorCode code, const std::string& message) {
  return {http_status(code),
          json{{"ok", false},
               {"error", {{"code", std::string(to_string(code))}, {"message", message}}}}
              .dump()};
}

template <typename F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return failure(e.code(), e.what());
  } catch (const json::exception& e) {
    return failure(ErrorCode::schema, e.what());
  } catch (const std::exception& e) {
    return failure(ErrorCode::io, e.what());
  }
}

json arg_summary(const Arg& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes()) {
    nodes.push_back({{"node_id", n.node_id},
                     {"field_id", n.field.field_id},
                     {"selected", n.selected},
                     {"label", std::string(to_string(n.label().name))},
                     {"value", n.field.features.value},
                     {"box", wire::to_json(n.field.box())}});
  }
  json matrix = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.size(); ++j) {
      row.push_back(i == j ? std::string("0") : g.edge(i, j).to_string());
    }
    matrix.push_back(std::move(row));
  }
  return {{"zone", std::string(to_string(g.zone()))},
          {"gap", g.formation().gap},
          {"line_merge", g.formation().line_merge},
          {"nodes", std::move(nodes)},
          {"matrix", std::move(matrix)}};
}

json report_json(const EvalReport& rep) {
  json per_zone = json::object();
  for (const auto& [z, v] : rep.per_zone) per_zone[std::string(to_string(z))] = v;
  json per_doc = json::array();
  for (const auto& [id, v] : rep.per_doc) per_doc.push_back({{"doc_id", id}, {"eval", v}});
  return {{"overall", rep.overall}, {"per_zone", per_zone}, {"per_doc", per_doc}};
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;

  std::once_flag loaded;
  std::map<std::string, Document> docs;
  std::map<std::string, PatternSelection> patterns;
  std::map<std::string, GroundTruthTable> gts;
  std::map<std::string, std::vector<std::string>> classes;  // pattern id -> doc ids
  std::optional<Error> load_error;

  std::shared_mutex arg_mutex;
  std::map<std::string, Arg> args;

  httplib::Server server;

  void load() {
    std::call_once(loaded, [&] {
      try {
        const auto& dir = config.data_dir;
        for (const auto& p : json_files(dir / "docs")) {
          Document d = load_document(p);
          docs.emplace(d.doc_id, std::move(d));
        }
        if (std::filesystem::exists(dir / "patterns")) {
          for (const auto& p : json_files(dir / "patterns")) {
            patterns.emplace(pattern_id_from_path(p), load_selection(p));
          }
        }
        if (std::filesystem::exists(dir / "gt")) {
          for (const auto& p : json_files(dir / "gt")) {
            GroundTruthTable gt = load_ground_truth(p);
            gts.emplace(gt.doc_id, std::move(gt));
          }
        }
        if (std::filesystem::exists(dir / "corpus.json")) {
          const json m = wire::parse(read_text_file(dir / "corpus.json"), "corpus.json");
          if (m.contains("classes")) {
            for (const auto& [cls, ids] : m["classes"].items()) {
              classes[cls] = ids.get<std::vector<std::string>>();
            }
          }
        }
      } catch (const Error& e) {
        load_error = e;
      }
    });
    if (load_error) throw *load_error;
  }

  const Document& document(const std::string& id) {
    auto it = docs.find(id);
    if (it == docs.end()) throw Error(ErrorCode::not_found, "no document '" + id + "'");
    return it->second;
  }

  Arg pattern_arg(const std::string& pattern_id) {
    {
      std::shared_lock lock(arg_mutex);
      if (auto it = args.find(pattern_id); it != args.end()) return it->second;
    }
    auto it = patterns.find(pattern_id);
    if (it == patterns.end()) throw Error(ErrorCode::not_found, "no pattern '" + pattern_id + "'");
    Arg g = build_pattern_graph(it->second, document(it->second.doc_id), config.options.pattern);
    std::unique_lock lock(arg_mutex);
    return args.emplace(pattern_id, std::move(g)).first->second;
  }

  std::vector<std::string> docs_for(const std::string& pattern_id) {
    if (auto it = classes.find(pattern_id); it != classes.end()) return it->second;
    std::vector<std::string> all;
    for (const auto& [id, _] : docs) all.push_back(id);
    return all;
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& srv = impl_->server;
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  srv.Get("/documents", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, list_documents());
  });
  srv.Get(R"(/documents/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_document(req.matches[1]));
  });
  srv.Post("/selection", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, post_selection(req.body));
  });
  srv.Post("/mine-corpus", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, post_mine_corpus(req.body));
  });
  srv.Get("/report", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_report(req.has_param("pattern_id") ? req.get_param_value("pattern_id") : ""));
  });
}

Service::~Service() { stop(); }

Response Service::list_documents() {
  return guarded([&] {
    impl_->load();
    json ids = json::array();
    for (const auto& [id, _] : impl_->docs) ids.push_back(id);
    return ok(ids);
  });
}

Response Service::get_document(const std::string& doc_id) {
  return guarded([&] {
    impl_->load();
    return ok(wire::to_json(impl_->document(doc_id)));
  });
}

Response Service::post_selection(const std::string& body) {
  return guarded([&] {
    impl_->load();
    const PatternSelection selection = wire::selection_from_json(wire::parse(body, "selection"));
    const Document& doc = impl_->document(selection.doc_id);
    const Arg g = build_pattern_graph(selection, doc, impl_->config.options.pattern);
    const TableResult result = extract_one(g, "selection", doc, impl_->config.options);
    return ok({{"arg", arg_summary(g)}, {"result", wire::to_json(result)}});
  });
}

Response Service::post_mine_corpus(const std::string& body) {
  return guarded([&] {
    impl_->load();
    const json req = wire::parse(body, "mine-corpus request");
    if (!req.is_object()) throw Error(ErrorCode::schema, "mine-corpus: expected an object");
    std::vector<std::string> pattern_ids;
    std::optional<std::vector<std::string>> doc_ids;
    for (const auto& [key, value] : req.items()) {
      if (key == "pattern_id" && value.is_string()) {
        pattern_ids.push_back(value.get<std::string>());
      } else if (key == "pattern_ids" && value.is_array()) {
        for (const auto& p : value) pattern_ids.push_back(p.get<std::string>());
      } else if (key == "doc_ids" && value.is_array()) {
        doc_ids = value.get<std::vector<std::string>>();
      } else {
        throw Error(ErrorCode::schema, "mine-corpus: unexpected field '" + key + "'");
      }
    }
    if (pattern_ids.empty()) throw Error(ErrorCode::schema, "mine-corpus: pattern_id is required");

    std::vector<RankedResult> ranked;
    for (const auto& pid : pattern_ids) {
      const Arg g = impl_->pattern_arg(pid);
      std::vector<Document> batch;
      for (const auto& id : doc_ids ? *doc_ids : impl_->docs_for(pid)) {
        batch.push_back(impl_->document(id));
      }
      for (auto& r : extract_all(g, pid, batch, impl_->config.options)) {
        ranked.push_back({pid, std::move(r)});
      }
    }
    json out = json::array();
    for (const auto& r : rank_results(std::move(ranked))) {
      out.push_back({{"pattern_id", r.pattern_id},
                     {"doc_id", r.result.doc_id},
                     {"result", wire::to_json(r.result)}});
    }
    return ok(out);
  });
}

Response Service::get_report(const std::string& pattern_id) {
  return guarded([&] {
    impl_->load();
    std::vector<std::string> pids;
    if (!pattern_id.empty()) {
      pids.push_back(pattern_id);
    } else {
      for (const auto& [pid, _] : impl_->patterns) pids.push_back(pid);
    }
    std::vector<EvalCase> cases;
    for (const auto& pid : pids) {
      const Arg g = impl_->pattern_arg(pid);
      for (const auto& id : impl_->docs_for(pid)) {
        auto gt = impl_->gts.find(id);
        if (gt == impl_->gts.end()) continue;
        cases.push_back({gt->second, extract_one(g, pid, impl_->document(id), impl_->config.options),
                         g.zone()});
      }
    }
    const EvalReport rep = report(cases);
    json data = report_json(rep);
    data["table"] = format_report_table({{"Eval", rep}});
    return ok(data);
  });
}

bool Service::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int Service::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace tabmine
