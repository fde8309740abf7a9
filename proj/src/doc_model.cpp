#include "tabmine/doc_model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "tabmine/errors.hpp"
#include "tabmine/wire.hpp"

namespace tabmine {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "io_error";
    case ErrorCode::schema: return "schema_error";
    case ErrorCode::degenerate_box: return "degenerate_box";
    case ErrorCode::field_resolution: return "field_resolution";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::doc_mismatch: return "doc_mismatch";
    case ErrorCode::unmatched_docs: return "unmatched_docs";
    case ErrorCode::overflow: return "overflow";
  }
  return "unknown";
}

BBox united(const BBox& a, const BBox& b) {
  return {std::min(a.left, b.left), std::min(a.top, b.top), std::max(a.right, b.right),
          std::max(a.bottom, b.bottom)};
}

std::int64_t intersection_area(const BBox& a, const BBox& b) {
  const std::int64_t w = std::min(a.right, b.right) - std::max(a.left, b.left);
  const std::int64_t h = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

bool contains_doubled(const BBox& box, std::int64_t x2, std::int64_t y2) {
  return 2LL * box.left <= x2 && x2 <= 2LL * box.right && 2LL * box.top <= y2 &&
         y2 <= 2LL * box.bottom;
}

bool contains_center(const BBox& box, const BBox& inner) {
  return contains_doubled(box, static_cast<std::int64_t>(inner.left) + inner.right,
                          static_cast<std::int64_t>(inner.top) + inner.bottom);
}

std::string_view to_string(Zone zone) {
  switch (zone) {
    case Zone::header: return "header";
    case Zone::body: return "body";
    case Zone::footer: return "footer";
  }
  return "body";
}

std::optional<Zone> zone_from_string(std::string_view name) {
  if (name == "header") return Zone::header;
  if (name == "body") return Zone::body;
  if (name == "footer") return Zone::footer;
  return std::nullopt;
}

bool same_band(const BBox& a, const BBox& b) {
  const int overlap = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (overlap < 0) return false;
  const int smaller = std::min(a.height(), b.height());
  return 2 * overlap >= smaller;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<std::vector<int>> line_bands(std::span<const Token> tokens) {
  const int n = static_cast<int>(tokens.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!same_band(tokens[i].box, tokens[j].box)) continue;
      const int ri = find_root(parent, i);
      const int rj = find_root(parent, j);
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }

  std::vector<std::vector<int>> bands;
  std::vector<int> band_of_root(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find_root(parent, i);
    if (band_of_root[r] < 0) {
      band_of_root[r] = static_cast<int>(bands.size());
      bands.emplace_back();
    }
    bands[band_of_root[r]].push_back(i);
  }

  auto token_less = [&](int a, int b) {
    const BBox& x = tokens[a].box;
    const BBox& y = tokens[b].box;
    if (x.left != y.left) return x.left < y.left;
    if (x.top != y.top) return x.top < y.top;
    return a < b;
  };
  for (auto& band : bands) std::sort(band.begin(), band.end(), token_less);

  auto band_key = [&](const std::vector<int>& band) {
    int top = tokens[band.front()].box.top;
    for (int t : band) top = std::min(top, tokens[t].box.top);
    return std::tuple(top, tokens[band.front()].box.left, band.front());
  };
  std::sort(bands.begin(), bands.end(),
            [&](const auto& a, const auto& b) { return band_key(a) < band_key(b); });
  return bands;
}

void to_reading_order(std::vector<Token>& tokens) {
  std::vector<Token> ordered;
  ordered.reserve(tokens.size());
  for (const auto& band : line_bands(tokens)) {
    for (int t : band) ordered.push_back(std::move(tokens[t]));
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) ordered[i].id = static_cast<int>(i);
  tokens = std::move(ordered);
}

void validate(const Document& doc) {
  if (doc.page_w < 0 || doc.page_h < 0) {
    throw Error(ErrorCode::schema, "document '" + doc.doc_id + "': negative page size");
  }
  std::vector<char> seen(doc.tokens.size(), 0);
  for (const Token& t : doc.tokens) {
    const std::string where = "document '" + doc.doc_id + "' token " + std::to_string(t.id);
    if (t.id < 0 || t.id >= static_cast<int>(doc.tokens.size()) || seen[t.id]) {
      throw Error(ErrorCode::schema, where + ": ids must be unique and dense 0..T-1");
    }
    seen[t.id] = 1;
    if (t.text.find_first_not_of(" \t") == std::string::npos) {
      throw Error(ErrorCode::schema, where + ": empty text");
    }
    if (t.text.find_first_of("\r\n") != std::string::npos) {
      throw Error(ErrorCode::schema, where + ": text contains a line break");
    }
    if (!t.box.valid()) throw Error(ErrorCode::degenerate_box, where + ": degenerate box");
    if (t.box.left < 0 || t.box.top < 0 || t.box.right > doc.page_w ||
        t.box.bottom > doc.page_h) {
      throw Error(ErrorCode::schema, where + ": box outside the page");
    }
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
}

Document load_document(const std::filesystem::path& path) {
  return wire::document_from_json(wire::parse(read_text_file(path), path.string()));
}

void save_document(const Document& doc, const std::filesystem::path& path) {
  write_text_file(path, wire::dump(wire::to_json(doc)));
}

PatternSelection load_selection(const std::filesystem::path& path) {
  return wire::selection_from_json(wire::parse(read_text_file(path), path.string()));
}

void save_selection(const PatternSelection& selection, const std::filesystem::path& path) {
  write_text_file(path, wire::dump(wire::to_json(selection)));
}

GroundTruthTable load_ground_truth(const std::filesystem::path& path) {
  return wire::ground_truth_from_json(wire::parse(read_text_file(path), path.string()));
}

void save_ground_truth(const GroundTruthTable& gt, const std::filesystem::path& path) {
  write_text_file(path, wire::dump(wire::to_json(gt)));
}

}  // namespace tabmine
