#include "tabmine/taxonomy.hpp"

#include <algorithm>

#include "tabmine/doc_model.hpp"
#include "tabmine/errors.hpp"
#include "tabmine/wire.hpp"

namespace tabmine {

std::string_view to_string(LabelName name) {
  switch (name) {
    case LabelName::date: return "date";
    case LabelName::price: return "price";
    case LabelName::quantity: return "quantity";
    case LabelName::percentage: return "percentage";
    case LabelName::code: return "code";
    case LabelName::description: return "description";
    case LabelName::address: return "address";
    case LabelName::other: return "other";
  }
  return "other";
}

std::optional<LabelName> label_from_string(std::string_view name) {
  for (auto l : {LabelName::date, LabelName::price, LabelName::quantity, LabelName::percentage,
                 LabelName::code, LabelName::description, LabelName::address,
                 LabelName::other}) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

std::string strip_trailing_noise(std::string_view value) {
  auto end = value.find_last_not_of(".,;: \t");
  if (end == std::string_view::npos) return std::string(value);
  return std::string(value.substr(0, end + 1));
}

Taxonomy::Taxonomy(std::vector<TaxonomyRule> rules) : rules_(std::move(rules)) {
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const auto& a, const auto& b) { return a.priority < b.priority; });
  compiled_.reserve(rules_.size());
  for (const auto& r : rules_) {
    if (r.name == LabelName::other) {
      throw Error(ErrorCode::schema, "taxonomy: `other` is implied and cannot be a rule");
    }
    try {
      compiled_.emplace_back(r.pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::schema, "taxonomy rule '" + std::string(to_string(r.name)) +
                                         "': bad expression: " + e.what());
    }
  }
}

const Taxonomy& Taxonomy::builtin() {
  static const Taxonomy kBuiltin = parse(builtin_taxonomy_text());
  return kBuiltin;
}

Taxonomy Taxonomy::parse(std::string_view json_text) {
  const auto j = wire::parse(json_text, "taxonomy");
  if (!j.is_object() || j.size() != 1 || !j.contains("rules") || !j["rules"].is_array()) {
    throw Error(ErrorCode::schema, "taxonomy: expected {rules:[...]}");
  }
  std::vector<TaxonomyRule> rules;
  for (const auto& rj : j["rules"]) {
    if (!rj.is_object() || rj.size() != 3 || !rj.contains("name") || !rj.contains("pattern") ||
        !rj.contains("priority") || !rj["name"].is_string() || !rj["pattern"].is_string() ||
        !rj["priority"].is_number_integer()) {
      throw Error(ErrorCode::schema, "taxonomy: rule must be {name, pattern, priority}");
    }
    auto name = label_from_string(rj["name"].get<std::string>());
    if (!name) {
      throw Error(ErrorCode::schema,
                  "taxonomy: unknown label '" + rj["name"].get<std::string>() + "'");
    }
    rules.push_back({*name, rj["pattern"].get<std::string>(), rj["priority"].get<int>()});
  }
  return Taxonomy(std::move(rules));
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

SemanticLabel Taxonomy::label(std::string_view value) const {
  const std::string cleaned = strip_trailing_noise(value);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (std::regex_match(cleaned, compiled_[i])) {
      return {rules_[i].name,
              std::string(to_string(rules_[i].name)) + "#" + std::to_string(rules_[i].priority)};
    }
  }
  return {LabelName::other, ""};
}

}  // namespace tabmine
