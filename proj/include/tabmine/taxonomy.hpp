#pragma once

#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace tabmine {

enum class LabelName { date, price, quantity, percentage, code, description, address, other };

std::string_view to_string(LabelName name);
std::optional<LabelName> label_from_string(std::string_view name);

struct SemanticLabel {
  LabelName name = LabelName::other;
  std::string matched_by;  // rule identifier "<name>#<priority>", empty for `other`

  friend bool operator==(const SemanticLabel&, const SemanticLabel&) = default;
};

struct TaxonomyRule {
  LabelName name = LabelName::other;
  std::string pattern;
  int priority = 0;
};

// Ordered set of regular-expression rules mapping a field value to a label.
// The first rule (lowest priority number) whose expression matches the whole
// value wins. Trailing OCR punctuation noise (.,;:) is stripped first.
class Taxonomy {
 public:
  explicit Taxonomy(std::vector<TaxonomyRule> rules);

  static const Taxonomy& builtin();
  static Taxonomy parse(std::string_view json_text);
  static Taxonomy load(const std::filesystem::path& path);

  SemanticLabel label(std::string_view value) const;
  const std::vector<TaxonomyRule>& rules() const { return rules_; }

 private:
  std::vector<TaxonomyRule> rules_;
  std::vector<std::regex> compiled_;
};

// Exact text of data/taxonomy.json, embedded at build time.
std::string_view builtin_taxonomy_text();

std::string strip_trailing_noise(std::string_view value);

}  // namespace tabmine
