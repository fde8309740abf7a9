#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tabmine {

// Axis-aligned rectangle in page pixels. Origin top-left, y grows downward.
struct BBox {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;

  int width() const { return right - left; }
  int height() const { return bottom - top; }
  std::int64_t area() const {
    return static_cast<std::int64_t>(width()) * static_cast<std::int64_t>(height());
  }
  bool valid() const { return left <= right && top <= bottom; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Tight union of two boxes.
BBox united(const BBox& a, const BBox& b);

// Area of the common region; 0 when the boxes are disjoint or only touch.
std::int64_t intersection_area(const BBox& a, const BBox& b);

// True when the point given in doubled coordinates lies inside `box`
// (edges inclusive). Doubling keeps box centers integral.
bool contains_doubled(const BBox& box, std::int64_t x2, std::int64_t y2);
bool contains_center(const BBox& box, const BBox& inner);

struct Token {
  int id = 0;
  std::string text;
  BBox box;

  friend bool operator==(const Token&, const Token&) = default;
};

enum class Zone { header, body, footer };

std::string_view to_string(Zone zone);
std::optional<Zone> zone_from_string(std::string_view name);

struct Document {
  std::string doc_id;
  int page_w = 0;
  int page_h = 0;
  std::vector<Token> tokens;  // reading order, ids 0..T-1

  friend bool operator==(const Document&, const Document&) = default;
};

struct PatternSelection {
  std::string doc_id;
  Zone zone = Zone::body;
  std::vector<BBox> boxes;

  friend bool operator==(const PatternSelection&, const PatternSelection&) = default;
};

inline constexpr std::size_t kMaxSelectionBoxes = 16;

struct GroundTruthTable {
  std::string doc_id;
  std::vector<std::vector<BBox>> items;

  friend bool operator==(const GroundTruthTable&, const GroundTruthTable&) = default;
};

// Two boxes share a line band iff their vertical overlap is at least half the
// smaller height.
bool same_band(const BBox& a, const BBox& b);

// Groups token indices into line bands (connected components of same_band),
// ordered by top edge; indices inside a band are ordered by left edge.
std::vector<std::vector<int>> line_bands(std::span<const Token> tokens);

// Sorts tokens into reading order and renumbers ids to their ordinal.
void to_reading_order(std::vector<Token>& tokens);

// Validates document invariants, throwing tabmine::Error on violation.
void validate(const Document& doc);

Document load_document(const std::filesystem::path& path);
void save_document(const Document& doc, const std::filesystem::path& path);
PatternSelection load_selection(const std::filesystem::path& path);
void save_selection(const PatternSelection& selection, const std::filesystem::path& path);
GroundTruthTable load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruthTable& gt, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tabmine
