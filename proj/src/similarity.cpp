#include "tabmine/similarity.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "tabmine/errors.hpp"

namespace tabmine {

std::string_view to_string(Feature f) {
  switch (f) {
    case Feature::type: return "type";
    case Feature::word: return "word";
    case Feature::length: return "length";
  }
  return "type";
}

void ScoreWeights::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(alpha)) throw Error(ErrorCode::precondition, "alpha must lie in [0,1]");
  if (!in_unit(accept_threshold)) {
    throw Error(ErrorCode::precondition, "accept threshold must lie in [0,1]");
  }
  if (lambda.empty()) throw Error(ErrorCode::precondition, "lambda must not be empty");
  for (const auto& [f, v] : lambda) {
    if (!in_unit(v)) {
      throw Error(ErrorCode::precondition,
                  "lambda[" + std::string(to_string(f)) + "] must lie in [0,1]");
    }
  }
}

std::size_t levenshtein(std::string_view x, std::string_view y) {
  std::vector<std::size_t> prev(y.size() + 1);
  std::vector<std::size_t> cur(y.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

double string_sim_type(std::string_view x, std::string_view y) {
  if (x.empty() || y.empty()) {
    throw Error(ErrorCode::precondition, "string_sim_type: empty signature");
  }
  const double longest = static_cast<double>(std::max(x.size(), y.size()));
  return 1.0 - static_cast<double>(levenshtein(x, y)) / longest;
}

double count_similarity(int a, int b) {
  const int longest = std::max(a, b);
  if (longest <= 0) return 1.0;
  return 1.0 - static_cast<double>(std::abs(a - b)) / static_cast<double>(longest);
}

double string_sim_word(const Field& x, const Field& y) {
  return count_similarity(x.features.now, y.features.now);
}

double string_sim_length(const Field& x, const Field& y) {
  return count_similarity(x.features.size, y.features.size);
}

double feature_score(const FieldFeatures& pattern, const FieldFeatures& candidate,
                     const ScoreWeights& w) {
  if (pattern.label.name == candidate.label.name && pattern.label.name != LabelName::other) {
    return 1.0;
  }
  double sum = 0.0;
  for (const auto& [feature, weight] : w.lambda) {
    double s = 0.0;
    switch (feature) {
      case Feature::type: s = string_sim_type(pattern.ftype, candidate.ftype); break;
      case Feature::word: s = count_similarity(pattern.now, candidate.now); break;
      case Feature::length: s = count_similarity(pattern.size, candidate.size); break;
    }
    sum += weight * s;
  }
  return sum / static_cast<double>(w.lambda.size());
}

double feature_score(const ArgNode& vq, const Field& v, const ScoreWeights& w) {
  return feature_score(vq.field.features, v.features, w);
}

}  // namespace tabmine
