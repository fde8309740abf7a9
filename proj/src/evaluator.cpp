#include "tabmine/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "tabmine/errors.hpp"

namespace tabmine {

double or1(const BBox& a, const BBox& b) {
  const std::int64_t denom = a.area() + b.area();
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(intersection_area(a, b)) / static_cast<double>(denom);
}

namespace {

// Greedy one-to-one pairing over a score matrix, highest score first (ties
// by row, then column). Returns the sum of the paired scores.
template <typename Score>
double greedy_pairing_sum(std::size_t rows, std::size_t cols, Score score) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double s = score(i, j);
      if (s > 0.0) cells.emplace_back(s, i, j);
    }
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });
  std::vector<char> row_used(rows, 0);
  std::vector<char> col_used(cols, 0);
  double sum = 0.0;
  for (const auto& [s, i, j] : cells) {
    if (row_used[i] || col_used[j]) continue;
    row_used[i] = col_used[j] = 1;
    sum += s;
  }
  return sum;
}

}  // namespace

double or2(std::span<const BBox> gt_item, std::span<const BBox> item) {
  if (gt_item.empty() || item.empty()) {
    throw Error(ErrorCode::precondition, "or2: both box lists must be non-empty");
  }
  const double sum = greedy_pairing_sum(gt_item.size(), item.size(), [&](auto i, auto j) {
    return or1(gt_item[i], item[j]);
  });
  return sum / static_cast<double>(std::max(gt_item.size(), item.size()));
}

double eval_table(const GroundTruthTable& gt, const TableResult& result) {
  if (gt.doc_id != result.doc_id) {
    throw Error(ErrorCode::doc_mismatch, "ground truth is for '" + gt.doc_id +
                                             "' but result is for '" + result.doc_id + "'");
  }
  const std::size_t denom = std::max(gt.items.size(), result.items.size());
  if (denom == 0) return 1.0;
  const double sum =
      greedy_pairing_sum(gt.items.size(), result.items.size(), [&](auto i, auto j) {
        if (gt.items[i].empty() || result.items[j].boxes.empty()) return 0.0;
        return or2(gt.items[i], result.items[j].boxes);
      });
  return sum / static_cast<double>(denom);
}

EvalReport report(std::span<const EvalCase> cases) {
  EvalReport rep;
  std::map<Zone, std::pair<double, int>> zone_acc;
  double total = 0.0;
  for (const auto& c : cases) {
    const double e = eval_table(c.gt, c.result);
    rep.per_doc.emplace_back(c.gt.doc_id, e);
    auto& acc = zone_acc[c.zone];
    acc.first += e;
    acc.second += 1;
    total += e;
  }
  for (const auto& [zone, acc] : zone_acc) rep.per_zone[zone] = acc.first / acc.second;
  rep.overall = cases.empty() ? 0.0 : total / static_cast<double>(cases.size());
  return rep;
}

EvalReport report(std::span<const GroundTruthTable> gts, std::span<const TableResult> results,
                  const std::map<std::string, Zone>& zones) {
  std::map<std::string, const TableResult*> by_id;
  for (const auto& r : results) by_id[r.doc_id] = &r;
  std::set<std::string> gt_ids;
  std::vector<std::string> unmatched;
  std::vector<EvalCase> cases;
  for (const auto& gt : gts) {
    gt_ids.insert(gt.doc_id);
    auto it = by_id.find(gt.doc_id);
    if (it == by_id.end()) {
      unmatched.push_back(gt.doc_id);
      continue;
    }
    auto z = zones.find(gt.doc_id);
    cases.push_back({gt, *it->second, z == zones.end() ? Zone::body : z->second});
  }
  for (const auto& r : results) {
    if (!gt_ids.count(r.doc_id)) unmatched.push_back(r.doc_id);
  }
  if (!unmatched.empty()) {
    std::string msg = "unmatched document ids:";
    for (const auto& id : unmatched) msg += " " + id;
    throw Error(ErrorCode::unmatched_docs, msg);
  }
  return report(cases);
}

std::string format_report_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::ostringstream out;
  int width = 14;
  for (const auto& row : rows) width = std::max(width, static_cast<int>(row.first.size()));
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %8s %8s %8s %8s\n", width, "Table type", "Header", "Body",
                "Footer", "Avg.");
  out << line;
  for (const auto& [name, rep] : rows) {
    auto cell = [&](Zone z) -> std::string {
      auto it = rep.per_zone.find(z);
      if (it == rep.per_zone.end()) return "-";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", 100.0 * it->second);
      return buf;
    };
    char avg[32];
    std::snprintf(avg, sizeof avg, "%.1f", 100.0 * rep.overall);
    std::snprintf(line, sizeof line, "%-*.*s %8s %8s %8s %8s\n", width, 200, name.c_str(),
                  cell(Zone::header).c_str(), cell(Zone::body).c_str(),
                  cell(Zone::footer).c_str(), avg);
    out << line;
  }
  return out.str();
}

}  // namespace tabmine
