#include "tabmine/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "tabmine/errors.hpp"

namespace tabmine {

std::string pattern_id_from_path(const std::filesystem::path& path) {
  std::string name = path.filename().string();
  return name.substr(0, name.find('.'));
}

TableResult extract_one(const Arg& pattern, const std::string& pattern_id, const Document& doc,
                        const RunOptions& options) {
  const Taxonomy& taxonomy =
      options.pattern.taxonomy ? *options.pattern.taxonomy : Taxonomy::builtin();
  TableResult result = mine_table(pattern, doc, options.weights, taxonomy);
  result.pattern_id = pattern_id;
  return result;
}

std::vector<TableResult> extract_all(const Arg& pattern, const std::string& pattern_id,
                                     std::span<const Document> docs,
                                     const RunOptions& options) {
  std::vector<TableResult> results(docs.size());
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)), 1, docs.size() ? docs.size() : 1);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < docs.size(); i = next++) {
        results[i] = extract_one(pattern, pattern_id, docs[i], options);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<std::filesystem::path> json_files(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        out.push_back(entry.path());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  if (!std::filesystem::exists(path, ec)) {
    throw Error(ErrorCode::io, "no such file or directory: '" + path.string() + "'");
  }
  out.push_back(path);
  return out;
}

std::filesystem::path result_path(const std::filesystem::path& out_dir, const std::string& doc_id) {
  return out_dir / (doc_id + ".result.json");
}

}  // namespace tabmine
