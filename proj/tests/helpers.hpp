#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tabmine/doc_model.hpp"
#include "tabmine/errors.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return TABMINE_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) {
  return source_dir() / "tests" / "fixtures" / name;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tabmine_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct Word {
  std::string text;
  tabmine::BBox box;
};

// Document whose tokens are given in reading order.
inline tabmine::Document make_doc(const std::vector<Word>& words, std::string id = "doc") {
  tabmine::Document doc;
  doc.doc_id = std::move(id);
  doc.page_w = 2000;
  doc.page_h = 2000;
  for (std::size_t i = 0; i < words.size(); ++i) {
    doc.tokens.push_back({static_cast<int>(i), words[i].text, words[i].box});
  }
  return doc;
}

// Runs `f` and returns the code of the tabmine::Error it throws.
template <typename F>
std::optional<tabmine::ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const tabmine::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <typename F>
std::string error_message_of(F&& f) {
  try {
    f();
  } catch (const tabmine::Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace testing
