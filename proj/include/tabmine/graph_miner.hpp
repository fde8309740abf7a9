#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tabmine/doc_model.hpp"
#include "tabmine/field_former.hpp"
#include "tabmine/pattern_graph.hpp"
#include "tabmine/similarity.hpp"
#include "tabmine/spatial_relations.hpp"

namespace tabmine {

struct NodeMatch {
  int q_node = 0;
  std::optional<int> d_field;  // nullopt when the node is ABSENT
  double fscore = 0.0;

  friend bool operator==(const NodeMatch&, const NodeMatch&) = default;
};

struct EdgeScore {
  int i = 0;  // pattern node ids, i < j
  int j = 0;
  double score = 0.0;

  friend bool operator==(const EdgeScore&, const EdgeScore&) = default;
};

struct MinedItem {
  std::vector<NodeMatch> matches;  // one per pattern node, in node order
  std::vector<EdgeScore> edges;    // one per unordered pattern node pair
  double S = 0.0;
  std::vector<BBox> boxes;  // assigned fields of the selected pattern nodes

  // Smallest assigned document field id; items are listed in this order
  // when their scores tie.
  int reading_position() const;

  friend bool operator==(const MinedItem&, const MinedItem&) = default;
};

struct TableResult {
  std::string doc_id;
  std::string pattern_id;
  double cs = 0.0;
  std::vector<MinedItem> items;

  friend bool operator==(const TableResult&, const TableResult&) = default;
};

// Pairwise spatial relations between the fields of a target document, with
// neighborhood levels counted over all of its fields. Computed lazily, so an
// index must not be shared between threads.
class DocumentIndex {
 public:
  explicit DocumentIndex(std::vector<Field> fields);

  const std::vector<Field>& fields() const { return fields_; }
  std::size_t size() const { return fields_.size(); }
  const Relation& relation(std::size_t a, std::size_t b) const;

 private:
  std::vector<Field> fields_;
  std::vector<BBox> boxes_;
  mutable std::vector<std::optional<Relation>> cache_;
};

struct PivotSelection {
  std::size_t pivot_node = 0;
  std::vector<int> candidates;  // document field ids carrying the pivot label
};

// Picks the selected pattern node whose label is rarest (but present) among
// the document fields. Throws Error(precondition) if no selected node has a
// label other than `other`.
PivotSelection select_pivots(const Arg& q, std::span<const Field> fields);

// True when document relation `r` may stand for pattern relation `rq`:
// identical predicates and levels within one of each other.
bool relation_compatible(const Relation& rq, const Relation& r);

// Edge agreement: 1 when predicates and levels are identical, else 0.
double relation_score(const Relation& rq, const Relation& r);

// Best-scoring data graph anchored at `pivot_field` for the pattern's pivot
// node. Exact over all injective partial assignments where every pair of
// assigned nodes is relation-compatible; unassignable nodes become ABSENT.
// Fields whose position in `doc` is flagged nonzero in `used` are unavailable.
MinedItem assign_relations(const Arg& q, std::size_t pivot_node, int pivot_field,
                           const DocumentIndex& doc, const ScoreWeights& w,
                           std::span<const char> used = {});

// Alpha-weighted blend of mean edge agreement and mean node score; reduces to the mean
// node score for single-node patterns.
double matching_score(const MinedItem& item, const Arg& q, const ScoreWeights& w);

TableResult mine_table(const Arg& q, const Document& doc, const ScoreWeights& w,
                       const Taxonomy& taxonomy = Taxonomy::builtin());
TableResult mine_table(const Arg& q, const DocumentIndex& doc, const ScoreWeights& w);

struct RankedResult {
  std::string pattern_id;
  TableResult result;
};

// Descending confidence; ties keep submission order.
std::vector<RankedResult> rank_results(std::vector<RankedResult> results);

double confidence_score(std::span<const MinedItem> items);

}  // namespace tabmine
