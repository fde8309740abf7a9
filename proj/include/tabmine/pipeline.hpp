#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tabmine/doc_model.hpp"
#include "tabmine/graph_miner.hpp"
#include "tabmine/pattern_graph.hpp"
#include "tabmine/similarity.hpp"
#include "tabmine/taxonomy.hpp"

namespace tabmine {

struct RunOptions {
  ScoreWeights weights;
  PatternOptions pattern;
  int jobs = 1;
};

// Pattern id of a selection file: its file name without extensions.
std::string pattern_id_from_path(const std::filesystem::path& path);

// Mines every document with the same pattern graph. Results keep document
// order; documents are processed on up to `jobs` threads.
std::vector<TableResult> extract_all(const Arg& pattern, const std::string& pattern_id,
                                     std::span<const Document> docs,
                                     const RunOptions& options);

TableResult extract_one(const Arg& pattern, const std::string& pattern_id,
                        const Document& doc, const RunOptions& options);

// Loads every *.json file of a directory (sorted by name) or a single file.
std::vector<std::filesystem::path> json_files(const std::filesystem::path& path);

std::filesystem::path result_path(const std::filesystem::path& out_dir,
                                  const std::string& doc_id);

}  // namespace tabmine
