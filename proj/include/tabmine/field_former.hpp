#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabmine/doc_model.hpp"
#include "tabmine/taxonomy.hpp"

namespace tabmine {

inline constexpr int kDefaultIntraFieldGap = 12;

struct FieldFeatures {
  BBox box;
  std::string value;
  std::string ftype;  // run signature over {A, 9, S}
  int size = 0;       // characters excluding spaces
  int wsep = 0;       // widest same-line gap between consecutive words
  int now = 0;        // number of words
  int nol = 0;        // number of lines
  SemanticLabel label;

  friend bool operator==(const FieldFeatures&, const FieldFeatures&) = default;
};

struct Field {
  int field_id = 0;
  std::vector<int> token_ids;
  FieldFeatures features;

  const BBox& box() const { return features.box; }
  friend bool operator==(const Field&, const Field&) = default;
};

struct FormationParams {
  int gap = kDefaultIntraFieldGap;
  bool line_merge = true;

  friend bool operator==(const FormationParams&, const FormationParams&) = default;
};

// Collapses a value into its character-class run signature, e.g. "12/04/13"
// -> "9S9S9". Whitespace is skipped and does not break runs.
std::string ftype_of(std::string_view value);

// Number of characters (UTF-8 code points) that are not whitespace.
int size_of(std::string_view value);

SemanticLabel label_field(const FieldFeatures& features,
                          const Taxonomy& taxonomy = Taxonomy::builtin());

// Widest gap between consecutive same-line words inside any selected field,
// or `fallback` when no selected field has two words on one line.
int intra_field_gap(const PatternSelection& selection, const Document& doc,
                    int fallback = kDefaultIntraFieldGap);

// Greedy per-line grouping of tokens into fields, optionally stitching
// vertically adjacent, horizontally aligned line segments into multi-line
// fields. Fields are numbered in reading order of their first token.
std::vector<Field> form_fields(const Document& doc, const FormationParams& params,
                               const Taxonomy& taxonomy = Taxonomy::builtin());

// Resolves each selection box to the field with the largest OR1 overlap.
std::vector<Field> fields_from_selection(const PatternSelection& selection,
                                         std::span<const Field> fields);

}  // namespace tabmine
