#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tabmine/doc_model.hpp"
#include "tabmine/graph_miner.hpp"

namespace tabmine {

// Box overlap ratio: 2|a∩b| / (|a| + |b|). Symmetric, in [0,1]; 0 when both
// boxes have zero area.
double or1(const BBox& a, const BBox& b);

// Item overlap: boxes paired greedily by descending or1 (each box used at most
// once), summed, and divided by the larger box count.
double or2(std::span<const BBox> gt_item, std::span<const BBox> item);

// Table overlap: items paired greedily by descending or2, summed, and divided
// by the larger item count.
double eval_table(const GroundTruthTable& gt, const TableResult& result);

struct EvalReport {
  std::vector<std::pair<std::string, double>> per_doc;
  std::map<Zone, double> per_zone;  // zones without documents are absent
  double overall = 0.0;
};

struct EvalCase {
  GroundTruthTable gt;
  TableResult result;
  Zone zone = Zone::body;
};

// Pairs results to ground truth by doc id. Throws Error(unmatched_docs)
// listing every id present on only one side.
EvalReport report(std::span<const GroundTruthTable> gts,
                  std::span<const TableResult> results,
                  const std::map<std::string, Zone>& zones = {});
EvalReport report(std::span<const EvalCase> cases);

// Layout of the summary table: one row per evaluation mode, zone columns
// plus the average, values in percent.
std::string format_report_table(
    const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace tabmine
