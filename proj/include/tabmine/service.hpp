#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "tabmine/pipeline.hpp"

namespace tabmine {

struct ServiceConfig {
  std::filesystem::path data_dir;  // holds docs/, patterns/ and gt/
  RunOptions options;
};

struct Response {
  int status = 200;
  std::string body;  // {"ok":true,"data":...} or {"ok":false,"error":{code,message}}
};

// Request handlers over a read-only corpus directory. Documents, patterns and
// ground truth are loaded on first use and cached; handlers may run
// concurrently.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response list_documents();
  Response get_document(const std::string& doc_id);
  Response post_selection(const std::string& body);
  Response post_mine_corpus(const std::string& body);
  Response get_report(const std::string& pattern_id);

  // Serves the handlers over HTTP until stop() is called.
  bool listen(const std::string& host, int port);
  // Binds to an ephemeral port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tabmine
