#include "tabmine/field_former.hpp"

#include <algorithm>
#include <map>

#include "tabmine/errors.hpp"
#include "tabmine/evaluator.hpp"

namespace tabmine {

namespace {

char char_class(unsigned char c) {
  if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) return 'A';
  if (c >= '0' && c <= '9') return '9';
  return 'S';
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

std::string box_text(const BBox& b) {
  return "[" + std::to_string(b.left) + "," + std::to_string(b.top) + "," +
         std::to_string(b.right) + "," + std::to_string(b.bottom) + "]";
}

// One run of tokens on a single line band.
struct Segment {
  std::vector<int> tokens;
  BBox box;
  int band = 0;
  int wsep = 0;
};

bool stitchable(const BBox& upper, const BBox& lower) {
  const int overlap = std::min(upper.right, lower.right) - std::max(upper.left, lower.left);
  if (overlap < 0) return false;
  if (2 * overlap < std::min(upper.width(), lower.width())) return false;
  const int vgap = lower.top - upper.bottom;
  return 2 * vgap <= std::min(upper.height(), lower.height());
}

int horizontal_overlap(const BBox& a, const BBox& b) {
  return std::min(a.right, b.right) - std::max(a.left, b.left);
}

}  // namespace

std::string ftype_of(std::string_view value) {
  std::string out;
  for (unsigned char c : value) {
    if (is_space(c) || is_continuation(c)) continue;
    const char k = char_class(c);
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  return out;
}

int size_of(std::string_view value) {
  int n = 0;
  for (unsigned char c : value) {
    if (!is_space(c) && !is_continuation(c)) ++n;
  }
  return n;
}

SemanticLabel label_field(const FieldFeatures& features, const Taxonomy& taxonomy) {
  if (features.value.empty()) {
    throw Error(ErrorCode::precondition, "label_field: empty value");
  }
  return taxonomy.label(features.value);
}

int intra_field_gap(const PatternSelection& selection, const Document& doc, int fallback) {
  const auto bands = line_bands(doc.tokens);
  std::vector<int> band_of(doc.tokens.size(), 0);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (int t : bands[b]) band_of[t] = static_cast<int>(b);
  }

  bool evidence = false;
  int widest = 0;
  for (const BBox& box : selection.boxes) {
    std::map<int, std::vector<int>> by_band;
    for (const auto& band : bands) {
      for (int t : band) {
        if (contains_center(box, doc.tokens[t].box)) by_band[band_of[t]].push_back(t);
      }
    }
    if (by_band.empty()) {
      throw Error(ErrorCode::field_resolution,
                  "selection box " + box_text(box) + " contains no token");
    }
    for (const auto& [band, members] : by_band) {
      for (std::size_t i = 1; i < members.size(); ++i) {
        const int gap = doc.tokens[members[i]].box.left - doc.tokens[members[i - 1]].box.right;
        widest = evidence ? std::max(widest, gap) : gap;
        evidence = true;
      }
    }
  }
  if (!evidence) return fallback;
  return std::max(widest, 0);
}

std::vector<Field> form_fields(const Document& doc, const FormationParams& params,
                               const Taxonomy& taxonomy) {
  if (params.gap < 0) throw Error(ErrorCode::precondition, "form_fields: negative gap");
  const auto& tokens = doc.tokens;
  const auto bands = line_bands(tokens);

  // Greedy left-to-right grouping inside each band.
  std::vector<Segment> segments;
  std::vector<std::vector<int>> segments_of_band(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (int t : bands[b]) {
      const BBox& box = tokens[t].box;
      const bool fresh = segments.empty() || segments.back().band != static_cast<int>(b) ||
                         box.left - tokens[segments.back().tokens.back()].box.right > params.gap;
      if (fresh) {
        segments_of_band[b].push_back(static_cast<int>(segments.size()));
        segments.push_back({{t}, box, static_cast<int>(b), 0});
        continue;
      }
      Segment& seg = segments.back();
      const int gap = box.left - tokens[seg.tokens.back()].box.right;
      seg.wsep = std::max(seg.wsep, gap);
      seg.tokens.push_back(t);
      seg.box = united(seg.box, box);
    }
  }

  // Each group becomes one field; tail is the group's lowest segment.
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of_segment(segments.size(), -1);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    std::map<int, int> claim;  // group -> lower segment
    if (params.line_merge && b > 0) {
      for (int s : segments_of_band[b]) {
        int best_group = -1;
        int best_overlap = -1;
        for (int u : segments_of_band[b - 1]) {
          const int g = group_of_segment[u];
          if (groups[g].back() != u || !stitchable(segments[u].box, segments[s].box)) continue;
          const int ov = horizontal_overlap(segments[u].box, segments[s].box);
          if (ov > best_overlap) {
            best_overlap = ov;
            best_group = g;
          }
        }
        if (best_group < 0) continue;
        auto it = claim.find(best_group);
        if (it == claim.end()) {
          claim[best_group] = s;
        } else {
          const int tail = groups[best_group].back();
          const int rival = it->second;
          if (horizontal_overlap(segments[tail].box, segments[s].box) >
              horizontal_overlap(segments[tail].box, segments[rival].box)) {
            it->second = s;
          }
        }
      }
    }
    for (int s : segments_of_band[b]) {
      int target = -1;
      for (const auto& [g, lower] : claim) {
        if (lower == s) target = g;
      }
      if (target < 0) {
        target = static_cast<int>(groups.size());
        groups.emplace_back();
      }
      groups[target].push_back(s);
      group_of_segment[s] = target;
    }
  }

  std::vector<Field> fields;
  fields.reserve(groups.size());
  for (const auto& group : groups) {
    Field f;
    FieldFeatures& ft = f.features;
    ft.box = segments[group.front()].box;
    for (int s : group) {
      const Segment& seg = segments[s];
      f.token_ids.insert(f.token_ids.end(), seg.tokens.begin(), seg.tokens.end());
      ft.box = united(ft.box, seg.box);
      ft.wsep = std::max(ft.wsep, seg.wsep);
    }
    std::sort(f.token_ids.begin(), f.token_ids.end());
    for (int t : f.token_ids) {
      if (!ft.value.empty()) ft.value.push_back(' ');
      ft.value += tokens[t].text;
    }
    ft.ftype = ftype_of(ft.value);
    ft.size = size_of(ft.value);
    ft.now = static_cast<int>(f.token_ids.size());
    ft.nol = static_cast<int>(group.size());
    ft.label = label_field(ft, taxonomy);
    fields.push_back(std::move(f));
  }
  std::sort(fields.begin(), fields.end(),
            [](const Field& a, const Field& b) { return a.token_ids.front() < b.token_ids.front(); });
  for (std::size_t i = 0; i < fields.size(); ++i) fields[i].field_id = static_cast<int>(i);
  return fields;
}

std::vector<Field> fields_from_selection(const PatternSelection& selection,
                                         std::span<const Field> fields) {
  std::vector<Field> out;
  std::vector<std::size_t> chosen_index;
  for (std::size_t b = 0; b < selection.boxes.size(); ++b) {
    const BBox& box = selection.boxes[b];
    double best = 0.0;
    std::size_t best_i = fields.size();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const double ov = or1(box, fields[i].box());
      if (ov > best) {
        best = ov;
        best_i = i;
      }
    }
    if (best_i == fields.size()) {
      throw Error(ErrorCode::field_resolution,
                  "selection box " + box_text(box) + " overlaps no field");
    }
    for (std::size_t k = 0; k < chosen_index.size(); ++k) {
      if (chosen_index[k] == best_i) {
        throw Error(ErrorCode::field_resolution,
                    "selection boxes " + box_text(selection.boxes[k]) + " and " + box_text(box) +
                        " resolve to the same field");
      }
    }
    chosen_index.push_back(best_i);
    out.push_back(fields[best_i]);
  }
  return out;
}

}  // namespace tabmine
