#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tabmine/doc_model.hpp"
#include "tabmine/graph_miner.hpp"

namespace tabmine::wire {

using nlohmann::json;

json to_json(const BBox& box);
json to_json(const Document& doc);
json to_json(const PatternSelection& selection);
json to_json(const GroundTruthTable& gt);
json to_json(const TableResult& result);

// Strict decoders: unknown keys, missing keys, non-integer coordinates and
// negative coordinates raise Error(schema); inverted boxes raise
// Error(degenerate_box).
BBox bbox_from_json(const json& j, std::string_view context);
Document document_from_json(const json& j);
PatternSelection selection_from_json(const json& j);
GroundTruthTable ground_truth_from_json(const json& j);
TableResult result_from_json(const json& j);

json parse(std::string_view text, std::string_view context);

// Canonical text form used for files and service payloads.
std::string dump(const json& j);

}  // namespace tabmine::wire

namespace tabmine {

// Result files round-trip exactly: load_result(save_result(r)) == r.
TableResult load_result(const std::filesystem::path& path);
void save_result(const TableResult& result, const std::filesystem::path& path);

}  // namespace tabmine
