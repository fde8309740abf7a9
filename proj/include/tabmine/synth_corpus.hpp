#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tabmine/doc_model.hpp"
#include "tabmine/taxonomy.hpp"

namespace tabmine {

enum class ValueGenerator { date, price, quantity, percentage, code, description };

std::string_view to_string(ValueGenerator g);

struct ColumnSpec {
  LabelName label = LabelName::other;
  ValueGenerator generator = ValueGenerator::description;
  bool key = true;  // key columns are selected and ground-truthed

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

enum class LayoutMode { linear, zigzag };

struct CorpusSpec {
  std::uint64_t seed = 1;
  int n_docs = 10;
  int n_classes = 1;
  int items_min = 3;
  int items_max = 8;
  std::vector<ColumnSpec> columns = default_columns();
  int jitter_px = 2;  // at most kMaxJitter
  double char_noise_rate = 0.0;
  double multiline_rate = 0.0;
  Zone zone = Zone::body;
  LayoutMode layout = LayoutMode::linear;
  int page_w = 2480;
  int page_h = 3508;

  static std::vector<ColumnSpec> default_columns();
  void validate() const;

  friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

inline constexpr int kMaxJitter = 6;

struct Corpus {
  std::vector<Document> documents;
  std::vector<GroundTruthTable> ground_truth;  // aligned with documents
  std::vector<int> doc_class;                  // aligned with documents
  std::vector<PatternSelection> class_patterns;  // drawn on each class's first document
  Zone zone = Zone::body;
};

Corpus generate(const CorpusSpec& spec);

// Selection covering the first ground-truthed item of a document.
PatternSelection self_pattern(const GroundTruthTable& gt, Zone zone);

// Replaces each character with probability `rate`: characters with an OCR
// confusable (0/O, 1/l, 5/S, 8/B) swap with it, others become spurious
// punctuation. Every selected character changes.
std::string apply_char_noise(std::string_view text, double rate, std::mt19937_64& rng);

CorpusSpec parse_corpus_spec(std::string_view json_text);
CorpusSpec load_corpus_spec(const std::filesystem::path& path);

// Writes docs/<id>.json, gt/<id>.json and patterns/class_<k>.json.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace tabmine
