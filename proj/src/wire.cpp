#include "tabmine/wire.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "tabmine/errors.hpp"

namespace tabmine::wire {

namespace {

[[noreturn]] void schema_error(std::string_view context, const std::string& what) {
  throw Error(ErrorCode::schema, std::string(context) + ": " + what);
}

void expect_object(const json& j, std::string_view context,
                   std::initializer_list<std::string_view> required,
                   std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) schema_error(context, "expected an object");
  for (auto key : required) {
    if (!j.contains(std::string(key))) {
      schema_error(context, "missing field '" + std::string(key) + "'");
    }
  }
  for (const auto& [key, _] : j.items()) {
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) schema_error(context, "unknown field '" + key + "'");
  }
}

int integer(const json& j, std::string_view context, bool non_negative) {
  if (!j.is_number_integer()) schema_error(context, "expected a decimal integer");
  const auto v = j.get<std::int64_t>();
  if (v > std::numeric_limits<int>::max() || v < std::numeric_limits<int>::min()) {
    schema_error(context, "integer out of range");
  }
  if (non_negative && v < 0) schema_error(context, "negative value");
  return static_cast<int>(v);
}

double real(const json& j, std::string_view context) {
  if (!j.is_number()) schema_error(context, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(context, "non-finite number");
  return v;
}

std::string text(const json& j, std::string_view context) {
  if (!j.is_string()) schema_error(context, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, std::string_view context) {
  if (!j.is_array()) schema_error(context, "expected an array");
  return j;
}

Zone zone(const json& j, std::string_view context) {
  auto z = zone_from_string(text(j, context));
  if (!z) schema_error(context, "zone must be header, body or footer");
  return *z;
}

std::vector<BBox> box_list(const json& j, std::string_view context) {
  std::vector<BBox> out;
  for (const auto& b : array(j, context)) out.push_back(bbox_from_json(b, context));
  return out;
}

json box_list_json(const std::vector<BBox>& boxes) {
  json out = json::array();
  for (const auto& b : boxes) out.push_back(to_json(b));
  return out;
}

}  // namespace

json to_json(const BBox& box) { return json::array({box.left, box.top, box.right, box.bottom}); }

BBox bbox_from_json(const json& j, std::string_view context) {
  if (!j.is_array() || j.size() != 4) schema_error(context, "box must be [l,t,r,b]");
  BBox b{integer(j[0], context, true), integer(j[1], context, true),
         integer(j[2], context, true), integer(j[3], context, true)};
  if (!b.valid()) {
    throw Error(ErrorCode::degenerate_box, std::string(context) + ": degenerate box");
  }
  return b;
}

json to_json(const Document& doc) {
  json tokens = json::array();
  for (const auto& t : doc.tokens) {
    tokens.push_back({{"id", t.id}, {"text", t.text}, {"box", to_json(t.box)}});
  }
  return {{"doc_id", doc.doc_id},
          {"page_w", doc.page_w},
          {"page_h", doc.page_h},
          {"tokens", std::move(tokens)}};
}

Document document_from_json(const json& j) {
  expect_object(j, "document", {"doc_id", "page_w", "page_h", "tokens"});
  Document doc;
  doc.doc_id = text(j["doc_id"], "document.doc_id");
  const std::string ctx = "document '" + doc.doc_id + "'";
  doc.page_w = integer(j["page_w"], ctx + ".page_w", true);
  doc.page_h = integer(j["page_h"], ctx + ".page_h", true);
  for (const auto& tj : array(j["tokens"], ctx + ".tokens")) {
    Token t;
    std::string tctx = ctx + " token";
    if (tj.is_object() && tj.contains("id") && tj["id"].is_number_integer()) {
      tctx += " " + std::to_string(tj["id"].get<std::int64_t>());
    }
    expect_object(tj, tctx, {"id", "text", "box"});
    t.id = integer(tj["id"], tctx + ".id", true);
    t.text = text(tj["text"], tctx + ".text");
    t.box = bbox_from_json(tj["box"], tctx + ".box");
    doc.tokens.push_back(std::move(t));
  }
  validate(doc);
  to_reading_order(doc.tokens);
  return doc;
}

json to_json(const PatternSelection& selection) {
  return {{"doc_id", selection.doc_id},
          {"zone", std::string(to_string(selection.zone))},
          {"boxes", box_list_json(selection.boxes)}};
}

PatternSelection selection_from_json(const json& j) {
  expect_object(j, "selection", {"doc_id", "zone", "boxes"});
  PatternSelection s;
  s.doc_id = text(j["doc_id"], "selection.doc_id");
  s.zone = zone(j["zone"], "selection.zone");
  s.boxes = box_list(j["boxes"], "selection.boxes");
  if (s.boxes.empty()) schema_error("selection.boxes", "at least one box is required");
  if (s.boxes.size() > kMaxSelectionBoxes) {
    schema_error("selection.boxes", "at most " + std::to_string(kMaxSelectionBoxes) + " boxes");
  }
  return s;
}

json to_json(const GroundTruthTable& gt) {
  json items = json::array();
  for (const auto& item : gt.items) items.push_back(box_list_json(item));
  return {{"doc_id", gt.doc_id}, {"items", std::move(items)}};
}

GroundTruthTable ground_truth_from_json(const json& j) {
  expect_object(j, "ground truth", {"doc_id", "items"});
  GroundTruthTable gt;
  gt.doc_id = text(j["doc_id"], "ground truth.doc_id");
  for (const auto& item : array(j["items"], "ground truth.items")) {
    gt.items.push_back(box_list(item, "ground truth item"));
    if (gt.items.back().empty()) schema_error("ground truth item", "item has no boxes");
  }
  if (gt.items.empty()) schema_error("ground truth.items", "no items");
  return gt;
}

json to_json(const TableResult& result) {
  json items = json::array();
  for (const auto& item : result.items) {
    json matches = json::array();
    for (const auto& m : item.matches) {
      matches.push_back({{"q_node", m.q_node},
                         {"field_id", m.d_field ? json(*m.d_field) : json(nullptr)},
                         {"fscore", m.fscore}});
    }
    json edges = json::array();
    for (const auto& e : item.edges) edges.push_back(json::array({e.i, e.j, e.score}));
    items.push_back({{"S", item.S},
                     {"matches", std::move(matches)},
                     {"boxes", box_list_json(item.boxes)},
                     {"edges", std::move(edges)}});
  }
  return {{"doc_id", result.doc_id},
          {"pattern_id", result.pattern_id},
          {"cs", result.cs},
          {"items", std::move(items)}};
}

TableResult result_from_json(const json& j) {
  expect_object(j, "result", {"doc_id", "pattern_id", "cs", "items"});
  TableResult r;
  r.doc_id = text(j["doc_id"], "result.doc_id");
  r.pattern_id = text(j["pattern_id"], "result.pattern_id");
  r.cs = real(j["cs"], "result.cs");
  for (const auto& ij : array(j["items"], "result.items")) {
    expect_object(ij, "result item", {"S", "matches", "boxes"}, {"edges"});
    MinedItem item;
    item.S = real(ij["S"], "result item.S");
    for (const auto& mj : array(ij["matches"], "result item.matches")) {
      expect_object(mj, "match", {"q_node", "field_id", "fscore"});
      NodeMatch m;
      m.q_node = integer(mj["q_node"], "match.q_node", true);
      if (!mj["field_id"].is_null()) m.d_field = integer(mj["field_id"], "match.field_id", true);
      m.fscore = real(mj["fscore"], "match.fscore");
      item.matches.push_back(m);
    }
    item.boxes = box_list(ij["boxes"], "result item.boxes");
    if (ij.contains("edges")) {
      for (const auto& ej : array(ij["edges"], "result item.edges")) {
        if (!ej.is_array() || ej.size() != 3) schema_error("edge", "expected [i, j, score]");
        item.edges.push_back({integer(ej[0], "edge.i", true), integer(ej[1], "edge.j", true),
                              real(ej[2], "edge.score")});
      }
    }
    r.items.push_back(std::move(item));
  }
  return r;
}

json parse(std::string_view text_in, std::string_view context) {
  try {
    return json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::schema, std::string(context) + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

}  // namespace tabmine::wire

namespace tabmine {

TableResult load_result(const std::filesystem::path& path) {
  return wire::result_from_json(wire::parse(read_text_file(path), path.string()));
}

void save_result(const TableResult& result, const std::filesystem::path& path) {
  write_text_file(path, wire::dump(wire::to_json(result)));
}

}  // namespace tabmine
