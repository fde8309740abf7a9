#pragma once

#include <map>
#include <string_view>

#include "tabmine/field_former.hpp"
#include "tabmine/pattern_graph.hpp"

namespace tabmine {

enum class Feature { type, word, length };

std::string_view to_string(Feature f);

struct ScoreWeights {
  double alpha = 0.5;
  std::map<Feature, double> lambda{{Feature::type, 1.0}, {Feature::word, 1.0},
                                   {Feature::length, 1.0}};
  double accept_threshold = 0.7;

  // Throws Error(precondition) when a weight leaves [0,1] or lambda is empty.
  void validate() const;
};

std::size_t levenshtein(std::string_view x, std::string_view y);

// 1 - edit distance over the longer signature length.
double string_sim_type(std::string_view x, std::string_view y);

// 1 - |a - b| / max(a, b) on word counts and on sizes.
double count_similarity(int a, int b);
double string_sim_word(const Field& x, const Field& y);
double string_sim_length(const Field& x, const Field& y);

// Node score: 1 for equal labels (other than `other`), else the
// lambda-weighted mean of the type/word/length similarities.
double feature_score(const FieldFeatures& pattern, const FieldFeatures& candidate,
                     const ScoreWeights& w);
double feature_score(const ArgNode& vq, const Field& v, const ScoreWeights& w);

}  // namespace tabmine
