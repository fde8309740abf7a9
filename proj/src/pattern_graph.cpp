#include "tabmine/pattern_graph.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "tabmine/errors.hpp"

namespace tabmine {

Arg::Arg(std::vector<ArgNode> nodes, Zone zone, FormationParams formation)
    : nodes_(std::move(nodes)), zone_(zone), formation_(formation) {
  const std::size_t n = nodes_.size();
  std::vector<BBox> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes_[i].node_id = static_cast<int>(i);
    boxes.push_back(nodes_[i].field.box());
  }
  edges_.assign(n * n, Relation{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Relation r = relation(boxes, i, j);
      edges_[i * n + j] = r;
      edges_[j * n + i] = r.converse();
    }
  }
}

const Relation& Arg::edge(std::size_t i, std::size_t j) const {
  if (i >= nodes_.size() || j >= nodes_.size() || i == j) {
    throw Error(ErrorCode::precondition, "Arg::edge: no edge (" + std::to_string(i) + "," +
                                             std::to_string(j) + ")");
  }
  return edges_[i * nodes_.size() + j];
}

std::vector<std::size_t> Arg::selected_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].selected) out.push_back(i);
  }
  return out;
}

PatternBuild build_pattern(const PatternSelection& selection, const Document& doc,
                           const PatternOptions& options) {
  if (selection.doc_id != doc.doc_id) {
    throw Error(ErrorCode::doc_mismatch, "selection is for '" + selection.doc_id +
                                             "' but document is '" + doc.doc_id + "'");
  }
  if (selection.boxes.empty()) {
    throw Error(ErrorCode::precondition, "selection has no boxes");
  }
  const Taxonomy& taxonomy = options.taxonomy ? *options.taxonomy : Taxonomy::builtin();

  FormationParams formation;
  formation.gap = options.gap ? *options.gap
                              : intra_field_gap(selection, doc, options.default_gap);
  formation.line_merge = options.line_merge;

  PatternBuild out;
  out.fields = form_fields(doc, formation, taxonomy);
  const auto chosen = fields_from_selection(selection, out.fields);

  BBox hull = chosen.front().box();
  int line_height = chosen.front().box().height() / chosen.front().features.nol;
  for (const auto& f : chosen) {
    hull = united(hull, f.box());
    line_height = std::min(line_height, f.box().height() / f.features.nol);
  }
  BBox band = hull;
  band.top -= line_height / 2;
  band.bottom += line_height / 2;

  std::vector<ArgNode> nodes;
  for (const auto& f : out.fields) {
    const bool selected = std::any_of(chosen.begin(), chosen.end(), [&](const Field& c) {
      return c.field_id == f.field_id;
    });
    if (selected || intersection_area(band, f.box()) > 0) {
      nodes.push_back({0, f, selected});
    }
  }
  out.arg = Arg(std::move(nodes), selection.zone, formation);
  return out;
}

Arg build_pattern_graph(const PatternSelection& selection, const Document& doc,
                        const PatternOptions& options) {
  return build_pattern(selection, doc, options).arg;
}

RelationVector relation_vector(const Arg& g, std::size_t pivot) {
  if (pivot >= g.size()) {
    throw Error(ErrorCode::precondition, "relation_vector: unknown pivot " + std::to_string(pivot));
  }
  RelationVector rv;
  rv.pivot = pivot;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j != pivot) rv.entries.emplace_back(j, g.edge(pivot, j));
  }
  std::stable_sort(rv.entries.begin(), rv.entries.end(), [&](const auto& a, const auto& b) {
    return std::tuple(a.second.k1 + a.second.k2, g.node(a.first).field.field_id) <
           std::tuple(b.second.k1 + b.second.k2, g.node(b.first).field.field_id);
  });
  return rv;
}

std::string arg_to_text(const Arg& g) {
  std::ostringstream out;
  out << "arg zone=" << to_string(g.zone()) << " nodes=" << g.size()
      << " gap=" << g.formation().gap << " line_merge=" << (g.formation().line_merge ? "true" : "false")
      << "\n";
  for (const auto& n : g.nodes()) {
    const BBox& b = n.field.box();
    out << "node\tv" << n.node_id << "\tfield=" << n.field.field_id
        << "\tselected=" << (n.selected ? "true" : "false") << "\tlabel=" << to_string(n.label().name)
        << "\tbox=[" << b.left << "," << b.top << "," << b.right << "," << b.bottom << "]"
        << "\tvalue=" << n.field.features.value << "\n";
  }
  out << "matrix";
  for (std::size_t j = 0; j < g.size(); ++j) out << "\tv" << j;
  out << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << "v" << i;
    for (std::size_t j = 0; j < g.size(); ++j) {
      out << "\t" << (i == j ? std::string("0") : g.edge(i, j).to_string());
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace tabmine
