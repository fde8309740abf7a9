#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabmine/doc_model.hpp"
#include "tabmine/field_former.hpp"
#include "tabmine/spatial_relations.hpp"
#include "tabmine/taxonomy.hpp"

namespace tabmine {

struct ArgNode {
  int node_id = 0;
  Field field;
  bool selected = false;

  const SemanticLabel& label() const { return field.features.label; }
  friend bool operator==(const ArgNode&, const ArgNode&) = default;
};

// Complete attributed relational graph over the fields of one pattern item.
// Nodes are kept in reading order of their fields; edges form a dense
// |V| x |V| matrix whose diagonal is unused.
class Arg {
 public:
  Arg() = default;
  Arg(std::vector<ArgNode> nodes, Zone zone, FormationParams formation);

  const std::vector<ArgNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const ArgNode& node(std::size_t i) const { return nodes_.at(i); }
  const Relation& edge(std::size_t i, std::size_t j) const;
  std::size_t edge_count() const { return nodes_.size() * (nodes_.size() - 1); }

  Zone zone() const { return zone_; }
  // Grouping parameters learnt from the selection; reused when forming
  // fields in documents mined with this pattern.
  const FormationParams& formation() const { return formation_; }

  std::vector<std::size_t> selected_nodes() const;

  friend bool operator==(const Arg&, const Arg&) = default;

 private:
  std::vector<ArgNode> nodes_;
  std::vector<Relation> edges_;
  Zone zone_ = Zone::body;
  FormationParams formation_;
};

struct RelationVector {
  std::size_t pivot = 0;
  std::vector<std::pair<std::size_t, Relation>> entries;
};

struct PatternOptions {
  std::optional<int> gap;  // overrides the selection-derived intra-field gap
  int default_gap = kDefaultIntraFieldGap;
  bool line_merge = true;
  const Taxonomy* taxonomy = nullptr;  // builtin when null
};

struct PatternBuild {
  Arg arg;
  std::vector<Field> fields;  // all fields of the pattern's document
};

// Builds the pattern graph from the client selection, completed with every
// unselected field that intersects the item band: the hull of the selected
// boxes grown by half a line height above and below.
PatternBuild build_pattern(const PatternSelection& selection, const Document& doc,
                           const PatternOptions& options = {});

Arg build_pattern_graph(const PatternSelection& selection, const Document& doc,
                        const PatternOptions& options = {});

// Edges of `pivot`, ordered by (k1 + k2, reading order of the target).
RelationVector relation_vector(const Arg& g, std::size_t pivot);

// Node list plus adjacency matrix, one cell per ordered pair as
// "hpred,vpred,k1,k2"; see README for the exact layout.
std::string arg_to_text(const Arg& g);

}  // namespace tabmine
