#include "tabmine/synth_corpus.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>

#include "tabmine/errors.hpp"
#include "tabmine/wire.hpp"

namespace tabmine {

namespace {

constexpr int kLineHeight = 24;
constexpr int kCharWidth = 14;
constexpr int kWordSpace = 10;
constexpr int kCellLineGap = 4;  // between the lines of one wrapped cell
constexpr int kRowGap = 28;
constexpr int kMargin = 120;

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{seed & 0xFFFFFFFFu, seed >> 32, stream, index & 0xFFFFFFFFu, index >> 32};
  return std::mt19937_64(seq);
}
constexpr int kBlockGap = 60;

constexpr std::array<const char*, 40> kWords = {
    "steel",  "bolt",   "copper", "cable",  "valve",  "pipe",   "paper",  "toner",
    "blue",   "red",    "large",  "small",  "metal",  "frame",  "panel",  "glass",
    "filter", "pump",   "motor",  "spring", "washer", "nut",    "screw",  "hinge",
    "lamp",   "socket", "switch", "tape",   "glue",   "brush",  "paint",  "ladder",
    "drill",  "blade",  "chain",  "hook",   "clamp",  "box",    "bag",    "roll"};

constexpr std::array<const char*, 8> kTowns = {"Paris", "Nancy", "Lyon",  "Metz",
                                               "Lille", "Reims", "Dijon", "Nantes"};

struct Rng {
  std::mt19937_64 engine;

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine); }
};

std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string format(const char* fmt, int a, int b = 0, int c = 0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

std::string money(int cents) {
  const int units = cents / 100;
  const int frac = cents % 100;
  if (units >= 1000) return format("%d,%03d.%02d", units / 1000, units % 1000, frac);
  return format("%d.%02d", units, frac);
}

std::vector<std::string> generate_value(ValueGenerator g, Rng& rng) {
  switch (g) {
    case ValueGenerator::date:
      return {format("%02d/%02d/%04d", rng.uniform(1, 28), rng.uniform(1, 12),
                     rng.uniform(2009, 2014))};
    case ValueGenerator::price:
      return {money(rng.uniform(100, 999999))};
    case ValueGenerator::quantity:
      return {std::to_string(rng.uniform(1, 999))};
    case ValueGenerator::percentage:
      return {std::to_string(rng.uniform(1, 30)) + "%"};
    case ValueGenerator::code: {
      std::string code;
      const int letters = rng.uniform(2, 3);
      for (int i = 0; i < letters; ++i) code.push_back(static_cast<char>('A' + rng.uniform(0, 25)));
      const int digits = rng.uniform(3, 5);
      for (int i = 0; i < digits; ++i) code.push_back(static_cast<char>('0' + rng.uniform(0, 9)));
      return {code};
    }
    case ValueGenerator::description: {
      std::vector<std::string> words;
      const int n = rng.uniform(2, 5);
      for (int i = 0; i < n; ++i) words.emplace_back(kWords[rng.uniform(0, kWords.size() - 1)]);
      words[0] = capitalize(words[0]);
      return words;
    }
  }
  return {"?"};
}

int max_width(ValueGenerator g) {
  switch (g) {
    case ValueGenerator::date: return 10 * kCharWidth;
    case ValueGenerator::price: return 8 * kCharWidth;
    case ValueGenerator::quantity: return 3 * kCharWidth;
    case ValueGenerator::percentage: return 3 * kCharWidth;
    case ValueGenerator::code: return 8 * kCharWidth;
    case ValueGenerator::description: return 5 * 6 * kCharWidth + 4 * kWordSpace;  // five words of at most six letters
  }
  return 0;
}

const char* column_title(ValueGenerator g) {
  switch (g) {
    case ValueGenerator::date: return "Date";
    case ValueGenerator::price: return "Amount";
    case ValueGenerator::quantity: return "Qty";
    case ValueGenerator::percentage: return "Rate";
    case ValueGenerator::code: return "Reference";
    case ValueGenerator::description: return "Description";
  }
  return "Column";
}

int text_width(const std::string& s) { return static_cast<int>(s.size()) * kCharWidth; }

class PageWriter {
 public:
  explicit PageWriter(Document& doc) : doc_(doc) {}

  // Places words as one line starting at (x, y); returns the line box.
  BBox line(const std::vector<std::string>& words, int x, int y) {
    BBox box{x, y, x, y + kLineHeight};
    for (const auto& w : words) {
      Token t;
      t.id = static_cast<int>(doc_.tokens.size());
      t.text = w;
      t.box = {x, y, x + text_width(w), y + kLineHeight};
      box = united(box, t.box);
      x = t.box.right + kWordSpace;
      doc_.tokens.push_back(std::move(t));
    }
    return box;
  }

 private:
  Document& doc_;
};

struct ClassLayout {
  std::vector<int> column_x;
  int header_shift = 0;
  std::vector<std::string> company;
};

ClassLayout make_class_layout(const CorpusSpec& spec, int cls) {
  Rng rng{seeded(spec.seed, std::uint64_t{0xC1A55}, std::uint64_t(cls))};
  ClassLayout layout;
  int x = kMargin + rng.uniform(0, 40);
  for (const auto& col : spec.columns) {
    layout.column_x.push_back(x);
    x += max_width(col.generator) + rng.uniform(48, 90);
  }
  layout.header_shift = rng.uniform(0, 40);
  layout.company = {capitalize(kWords[rng.uniform(0, kWords.size() - 1)]),
                    capitalize(kWords[rng.uniform(0, kWords.size() - 1)]), "Supplies"};
  return layout;
}

}  // namespace

std::string_view to_string(ValueGenerator g) {
  switch (g) {
    case ValueGenerator::date: return "date";
    case ValueGenerator::price: return "price";
    case ValueGenerator::quantity: return "quantity";
    case ValueGenerator::percentage: return "percentage";
    case ValueGenerator::code: return "code";
    case ValueGenerator::description: return "description";
  }
  return "description";
}

std::vector<ColumnSpec> CorpusSpec::default_columns() {
  return {{LabelName::date, ValueGenerator::date, true},
          {LabelName::code, ValueGenerator::code, true},
          {LabelName::description, ValueGenerator::description, true},
          {LabelName::quantity, ValueGenerator::quantity, true},
          {LabelName::price, ValueGenerator::price, false},
          {LabelName::price, ValueGenerator::price, true}};
}

void CorpusSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::precondition, "corpus spec: " + what); };
  if (n_docs < 1) fail("n_docs must be at least 1");
  if (n_classes < 1 || n_classes > n_docs) fail("n_classes must lie in [1, n_docs]");
  if (items_min < 1 || items_max < items_min) fail("items_per_doc must be a range [min>=1, max]");
  if (columns.empty()) fail("no columns");
  const bool any_key = std::any_of(columns.begin(), columns.end(), [](const ColumnSpec& c) {
    return c.key && c.label != LabelName::other;
  });
  if (!any_key) fail("at least one labelled key column is required");
  if (jitter_px < 0 || jitter_px > kMaxJitter) {
    fail("jitter_px must lie in [0, " + std::to_string(kMaxJitter) + "]");
  }
  if (!(char_noise_rate >= 0.0 && char_noise_rate <= 1.0)) fail("char_noise_rate outside [0,1]");
  if (!(multiline_rate >= 0.0 && multiline_rate <= 1.0)) fail("multiline_rate outside [0,1]");
  if (page_w <= 0 || page_h <= 0) fail("page size must be positive");
}

std::string apply_char_noise(std::string_view text, double rate, std::mt19937_64& rng) {
  static const std::map<char, char> kConfusable = {{'0', 'O'}, {'O', '0'}, {'1', 'l'},
                                                   {'l', '1'}, {'5', 'S'}, {'S', '5'},
                                                   {'8', 'B'}, {'B', '8'}};
  static constexpr std::array<char, 3> kPunct = {'.', ':', ';'};
  std::bernoulli_distribution hit(rate);
  std::string out(text);
  for (char& c : out) {
    if (!hit(rng)) continue;
    if (auto it = kConfusable.find(c); it != kConfusable.end()) {
      c = it->second;
      continue;
    }
    char p = kPunct[std::uniform_int_distribution<int>(0, 2)(rng)];
    if (p == c) p = kPunct[(std::find(kPunct.begin(), kPunct.end(), c) - kPunct.begin() + 1) % 3];
    c = p;
  }
  return out;
}

Corpus generate(const CorpusSpec& spec) {
  spec.validate();
  Corpus corpus;
  corpus.zone = spec.zone;

  std::vector<ClassLayout> layouts;
  for (int c = 0; c < spec.n_classes; ++c) layouts.push_back(make_class_layout(spec, c));

  for (int d = 0; d < spec.n_docs; ++d) {
    const int cls = d % spec.n_classes;
    const ClassLayout& layout = layouts[cls];
    Rng rng{seeded(spec.seed, std::uint64_t{0xD0C}, std::uint64_t(d))};

    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "doc_%04d", d);
    doc.doc_id = id;
    doc.page_w = spec.page_w;
    doc.page_h = spec.page_h;
    PageWriter page(doc);
    GroundTruthTable gt;
    gt.doc_id = doc.doc_id;

    auto check_fits = [&](int bottom, int right) {
      if (bottom > spec.page_h - kMargin / 2 || right > spec.page_w - kMargin / 2) {
        throw Error(ErrorCode::overflow, "corpus spec: document " + doc.doc_id +
                                             " overflows the page");
      }
    };

    auto planted_table = [&](int y) {
      const int n_items = rng.uniform(spec.items_min, spec.items_max);
      const int j = spec.jitter_px;
      const int zig_pitch = kLineHeight + kCellLineGap + 2 * j;
      for (int item = 0; item < n_items; ++item) {
        std::vector<BBox> key_boxes;
        int row_bottom = y;
        const int row_dy = rng.uniform(-j, j);
        for (std::size_t c = 0; c < spec.columns.size(); ++c) {
          const ColumnSpec& col = spec.columns[c];
          auto words = generate_value(col.generator, rng);
          const int dx = rng.uniform(-j, j);
          const int dy = rng.uniform(-j, j);
          int x = layout.column_x[c] + dx;
          int top = y + row_dy + dy;
          if (spec.layout == LayoutMode::zigzag && c % 2 == 1) top += zig_pitch;
          const bool wrap = words.size() >= 2 && spec.multiline_rate > 0.0 &&
                            rng.unit() < spec.multiline_rate;
          BBox box;
          if (wrap) {
            const std::size_t half = (words.size() + 1) / 2;
            std::vector<std::string> first(words.begin(), words.begin() + half);
            std::vector<std::string> second(words.begin() + half, words.end());
            box = page.line(first, x, top);
            box = united(box, page.line(second, x, top + kLineHeight + kCellLineGap));
          } else {
            box = page.line(words, x, top);
          }
          row_bottom = std::max(row_bottom, box.bottom);
          check_fits(box.bottom, box.right);
          if (col.key) key_boxes.push_back(box);
        }
        gt.items.push_back(std::move(key_boxes));
        y = row_bottom + kRowGap + 2 * j;
      }
      return y;
    };

    // Header block.
    int y = 140 + layout.header_shift;
    page.line(layout.company, kMargin, y);
    y += kLineHeight + 16;
    page.line({std::to_string(rng.uniform(1, 99)), "Rue", "de", "la",
               capitalize(kWords[rng.uniform(0, kWords.size() - 1)]),
               std::to_string(rng.uniform(10000, 99999)), kTowns[rng.uniform(0, kTowns.size() - 1)]},
              kMargin, y);
    y += kLineHeight + 16;
    page.line({"Invoice", "No"}, kMargin, y);
    page.line(generate_value(ValueGenerator::code, rng), kMargin + 260, y);
    page.line({"Invoice", "date"}, kMargin + 900, y);
    page.line(generate_value(ValueGenerator::date, rng), kMargin + 1160, y);
    y += kLineHeight + kBlockGap;

    if (spec.zone == Zone::header) y = planted_table(y) + kBlockGap;

    // Body.
    if (spec.zone == Zone::body) {
      for (std::size_t c = 0; c < spec.columns.size(); ++c) {
        page.line({column_title(spec.columns[c].generator)}, layout.column_x[c], y);
      }
      y += kLineHeight + kRowGap + 2 * spec.jitter_px;
      y = planted_table(y) + kBlockGap;
    } else {
      for (int l = 0; l < 3; ++l) {
        std::vector<std::string> words;
        const int n = rng.uniform(6, 12);
        for (int w = 0; w < n; ++w) words.emplace_back(kWords[rng.uniform(0, kWords.size() - 1)]);
        words[0] = capitalize(words[0]);
        page.line(words, kMargin, y);
        y += kLineHeight + kRowGap;
      }
      y += kBlockGap;
    }

    // Footer totals.
    const int label_x = spec.page_w - kMargin - 640;
    const int value_x = spec.page_w - kMargin - 200;
    page.line({"Subtotal"}, label_x, y);
    page.line({money(rng.uniform(1000, 999999))}, value_x, y);
    y += kLineHeight + kRowGap;
    page.line({"VAT", std::to_string(rng.uniform(5, 20)) + "%"}, label_x, y);
    page.line({money(rng.uniform(100, 99999))}, value_x, y);
    y += kLineHeight + kRowGap;
    page.line({"Total", "due"}, label_x, y);
    page.line({money(rng.uniform(1000, 999999))}, value_x, y);
    y += kLineHeight + kBlockGap;
    check_fits(y, 0);

    if (spec.zone == Zone::footer) planted_table(y);

    // OCR noise draws from its own stream so geometry and values do not
    // depend on the noise rate.
    if (spec.char_noise_rate > 0.0) {
      std::mt19937_64 noise = seeded(spec.seed, 0x9015E, std::uint64_t(d));
      for (auto& t : doc.tokens) t.text = apply_char_noise(t.text, spec.char_noise_rate, noise);
    }

    to_reading_order(doc.tokens);
    validate(doc);
    corpus.documents.push_back(std::move(doc));
    corpus.ground_truth.push_back(std::move(gt));
    corpus.doc_class.push_back(cls);
  }

  for (int c = 0; c < spec.n_classes; ++c) {
    corpus.class_patterns.push_back(self_pattern(corpus.ground_truth[c], spec.zone));
  }
  return corpus;
}

PatternSelection self_pattern(const GroundTruthTable& gt, Zone zone) {
  if (gt.items.empty()) throw Error(ErrorCode::precondition, "ground truth has no items");
  return {gt.doc_id, zone, gt.items.front()};
}

namespace {

using wire::json;

[[noreturn]] void spec_error(const std::string& what) {
  throw Error(ErrorCode::schema, "corpus spec: " + what);
}

int spec_int(const json& j, const char* key) {
  if (!j.is_number_integer()) spec_error(std::string(key) + " must be an integer");
  return j.get<int>();
}

double spec_real(const json& j, const char* key) {
  if (!j.is_number()) spec_error(std::string(key) + " must be a number");
  return j.get<double>();
}

}  // namespace

CorpusSpec parse_corpus_spec(std::string_view json_text) {
  const json j = wire::parse(json_text, "corpus spec");
  if (!j.is_object()) spec_error("expected an object");
  static const std::array<const char*, 12> kKeys = {
      "seed",      "n_docs",          "n_classes",      "items_per_doc", "columns", "jitter_px",
      "char_noise_rate", "multiline_rate", "zone",     "layout",        "page_w",  "page_h"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(kKeys.begin(), kKeys.end(), [&](const char* k) { return key == k; }) ==
        kKeys.end()) {
      spec_error("unknown field '" + key + "'");
    }
  }
  if (!j.contains("seed") || !j.contains("n_docs")) spec_error("seed and n_docs are required");

  CorpusSpec spec;
  if (!j["seed"].is_number_unsigned()) spec_error("seed must be a non-negative integer");
  spec.seed = j["seed"].get<std::uint64_t>();
  spec.n_docs = spec_int(j["n_docs"], "n_docs");
  if (j.contains("n_classes")) spec.n_classes = spec_int(j["n_classes"], "n_classes");
  if (j.contains("items_per_doc")) {
    const auto& r = j["items_per_doc"];
    if (!r.is_array() || r.size() != 2) spec_error("items_per_doc must be [min, max]");
    spec.items_min = spec_int(r[0], "items_per_doc");
    spec.items_max = spec_int(r[1], "items_per_doc");
  }
  if (j.contains("columns")) {
    spec.columns.clear();
    for (const auto& cj : j["columns"]) {
      if (!cj.is_object() || !cj.contains("label") || !cj.contains("generator")) {
        spec_error("column must be {label, generator[, key]}");
      }
      ColumnSpec col;
      auto label = label_from_string(cj["label"].get<std::string>());
      if (!label) spec_error("unknown column label");
      col.label = *label;
      const auto gname = cj["generator"].get<std::string>();
      bool found = false;
      for (auto g : {ValueGenerator::date, ValueGenerator::price, ValueGenerator::quantity,
                     ValueGenerator::percentage, ValueGenerator::code,
                     ValueGenerator::description}) {
        if (to_string(g) == gname) {
          col.generator = g;
          found = true;
        }
      }
      if (!found) spec_error("unknown generator '" + gname + "'");
      if (cj.contains("key")) {
        if (!cj["key"].is_boolean()) spec_error("column key must be a boolean");
        col.key = cj["key"].get<bool>();
      }
      for (const auto& [key, _] : cj.items()) {
        if (key != "label" && key != "generator" && key != "key") {
          spec_error("unknown column field '" + key + "'");
        }
      }
      spec.columns.push_back(col);
    }
  }
  if (j.contains("jitter_px")) spec.jitter_px = spec_int(j["jitter_px"], "jitter_px");
  if (j.contains("char_noise_rate")) spec.char_noise_rate = spec_real(j["char_noise_rate"], "char_noise_rate");
  if (j.contains("multiline_rate")) spec.multiline_rate = spec_real(j["multiline_rate"], "multiline_rate");
  if (j.contains("zone")) {
    auto z = j["zone"].is_string() ? zone_from_string(j["zone"].get<std::string>()) : std::nullopt;
    if (!z) spec_error("zone must be header, body or footer");
    spec.zone = *z;
  }
  if (j.contains("layout")) {
    const auto name = j["layout"].is_string() ? j["layout"].get<std::string>() : "";
    if (name == "linear") spec.layout = LayoutMode::linear;
    else if (name == "zigzag") spec.layout = LayoutMode::zigzag;
    else spec_error("layout must be linear or zigzag");
  }
  if (j.contains("page_w")) spec.page_w = spec_int(j["page_w"], "page_w");
  if (j.contains("page_h")) spec.page_h = spec_int(j["page_h"], "page_h");
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::schema, e.what());
  }
  return spec;
}

CorpusSpec load_corpus_spec(const std::filesystem::path& path) {
  return parse_corpus_spec(read_text_file(path));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  json classes = json::object();
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    save_document(doc, dir / "docs" / (doc.doc_id + ".json"));
    save_ground_truth(corpus.ground_truth[d], dir / "gt" / (doc.doc_id + ".json"));
    classes["class_" + std::to_string(corpus.doc_class[d])].push_back(doc.doc_id);
  }
  for (std::size_t c = 0; c < corpus.class_patterns.size(); ++c) {
    save_selection(corpus.class_patterns[c],
                   dir / "patterns" / ("class_" + std::to_string(c) + ".json"));
  }
  const json manifest = {{"zone", std::string(to_string(corpus.zone))}, {"classes", classes}};
  write_text_file(dir / "corpus.json", wire::dump(manifest));
}

}  // namespace tabmine
