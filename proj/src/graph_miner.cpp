#include "tabmine/graph_miner.hpp"

#include <algorithm>
#include <deque>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <tuple>

#include "tabmine/errors.hpp"

namespace tabmine {

int MinedItem::reading_position() const {
  int pos = std::numeric_limits<int>::max();
  for (const auto& m : matches) {
    if (m.d_field) pos = std::min(pos, *m.d_field);
  }
  return pos;
}

DocumentIndex::DocumentIndex(std::vector<Field> fields)
    : fields_(std::move(fields)), cache_(fields_.size() * fields_.size()) {
  boxes_.reserve(fields_.size());
  for (const auto& f : fields_) boxes_.push_back(f.box());
}

const Relation& DocumentIndex::relation(std::size_t a, std::size_t b) const {
  const std::size_t n = fields_.size();
  auto& slot = cache_[a * n + b];
  if (!slot) {
    slot = tabmine::relation(boxes_, a, b);
    cache_[b * n + a] = slot->converse();
  }
  return *slot;
}

PivotSelection select_pivots(const Arg& q, std::span<const Field> fields) {
  std::map<LabelName, int> counts;
  for (const auto& f : fields) ++counts[f.features.label.name];

  std::optional<std::size_t> first_labeled;
  std::optional<std::size_t> best;
  for (std::size_t i : q.selected_nodes()) {
    const LabelName name = q.node(i).label().name;
    if (name == LabelName::other) continue;
    if (!first_labeled) first_labeled = i;
    const int c = counts[name];
    if (c == 0) continue;
    if (!best || c < counts[q.node(*best).label().name]) best = i;
  }
  if (!first_labeled) {
    throw Error(ErrorCode::precondition,
                "pattern has no selected field with a semantic label to anchor on");
  }
  PivotSelection out;
  out.pivot_node = best.value_or(*first_labeled);
  const LabelName pivot_label = q.node(out.pivot_node).label().name;
  for (const auto& f : fields) {
    if (f.features.label.name == pivot_label) out.candidates.push_back(f.field_id);
  }
  return out;
}

bool relation_compatible(const Relation& rq, const Relation& r) {
  return rq.same_predicates(r) && std::abs(rq.k1 - r.k1) <= 1 && std::abs(rq.k2 - r.k2) <= 1;
}

double relation_score(const Relation& rq, const Relation& r) { return rq == r ? 1.0 : 0.0; }

double matching_score(const MinedItem& item, const Arg& q, const ScoreWeights& w) {
  const double v = static_cast<double>(q.size());
  if (v == 0.0) return 0.0;
  double node_sum = 0.0;
  for (const auto& m : item.matches) node_sum += m.fscore;
  const double node_mean = node_sum / v;
  const double r = v * (v - 1.0) / 2.0;
  if (r == 0.0) return node_mean;
  double edge_sum = 0.0;
  for (const auto& e : item.edges) edge_sum += e.score;
  return w.alpha * (edge_sum / r) + (1.0 - w.alpha) * node_mean;
}

double confidence_score(std::span<const MinedItem> items) {
  if (items.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& it : items) sum += it.S;
  return sum / static_cast<double>(items.size());
}

namespace {

constexpr double kBoundSlack = 1e-12;

struct Candidate {
  std::size_t field = 0;  // position in the document index
  double fscore = 0.0;
};

// Depth-first branch and bound over the pattern nodes in relation-vector
// order. Candidate lists are narrowed by forward checking so that every
// surviving candidate is compatible with all assignments made so far.
class AssignmentSearch {
 public:
  AssignmentSearch(const Arg& q, std::size_t pivot_node, std::size_t pivot_pos,
                   const DocumentIndex& doc, const ScoreWeights& w, std::span<const char> used)
      : q_(q), doc_(doc), w_(w), n_(q.size()), assigned_(n_, kAbsent) {
    assigned_[pivot_node] = pivot_pos;
    pivot_fscore_ = feature_score(q.node(pivot_node), doc.fields()[pivot_pos], w);

    for (const auto& [target, rel] : relation_vector(q, pivot_node).entries) order_.push_back(target);

    std::vector<std::vector<Candidate>> lists(n_);
    for (std::size_t node : order_) {
      const Relation& rq = q.edge(pivot_node, node);
      for (std::size_t f = 0; f < doc.size(); ++f) {
        if (f == pivot_pos || (!used.empty() && used[f])) continue;
        if (!relation_compatible(rq, doc.relation(pivot_pos, f))) continue;
        lists[node].push_back({f, feature_score(q.node(node), doc.fields()[f], w)});
      }
      std::stable_sort(lists[node].begin(), lists[node].end(),
                       [](const Candidate& a, const Candidate& b) { return a.fscore > b.fscore; });
    }
    lists_.push_back(std::move(lists));
    pivot_node_ = pivot_node;
  }

  std::vector<std::size_t> run() {
    best_assignment_ = assigned_;
    best_score_ = -1.0;
    descend(0, pivot_fscore_, 0.0);
    return best_assignment_;
  }

  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

 private:
  double blend(double edge_sum, double node_sum) const {
    const double v = static_cast<double>(n_);
    const double r = v * (v - 1.0) / 2.0;
    if (r == 0.0) return node_sum / v;
    return w_.alpha * (edge_sum / r) + (1.0 - w_.alpha) * (node_sum / v);
  }

  double exact_score(const std::vector<std::size_t>& assignment) const {
    double node_sum = 0.0;
    double edge_sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (assignment[i] == kAbsent) continue;
      node_sum += feature_score(q_.node(i), doc_.fields()[assignment[i]], w_);
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (assignment[j] == kAbsent) continue;
        edge_sum += relation_score(q_.edge(i, j), doc_.relation(assignment[i], assignment[j]));
      }
    }
    return blend(edge_sum, node_sum);
  }

  void descend(std::size_t depth, double node_sum, double edge_sum) {
    const auto& lists = lists_.back();
    // Upper bound: every open edge agrees and every remaining node takes its
    // best surviving candidate.
    std::size_t assigned_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (assigned_[i] != kAbsent) ++assigned_count;
    }
    std::size_t live = 0;
    double node_bound = node_sum;
    for (std::size_t d = depth; d < order_.size(); ++d) {
      const auto& l = lists[order_[d]];
      if (l.empty()) continue;
      ++live;
      node_bound += l.front().fscore;
    }
    const double open_edges =
        static_cast<double>(assigned_count * live + live * (live - (live > 0 ? 1 : 0)) / 2);
    if (blend(edge_sum + open_edges, node_bound) <= best_score_ + kBoundSlack &&
        best_score_ >= 0.0) {
      return;
    }

    if (depth == order_.size()) {
      const double s = exact_score(assigned_);
      if (s > best_score_) {
        best_score_ = s;
        best_assignment_ = assigned_;
      }
      return;
    }

    const std::size_t node = order_[depth];
    const std::vector<Candidate> options = lists[node];
    for (const Candidate& c : options) {
      bool taken = false;
      for (std::size_t i = 0; i < n_; ++i) {
        if (assigned_[i] == c.field) taken = true;
      }
      if (taken) continue;

      double gained = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (i == node || assigned_[i] == kAbsent) continue;
        gained += relation_score(q_.edge(i, node), doc_.relation(assigned_[i], c.field));
      }

      // Forward check the remaining nodes against (node -> c.field).
      std::vector<std::vector<Candidate>> narrowed = lists;
      for (std::size_t d = depth + 1; d < order_.size(); ++d) {
        const std::size_t other = order_[d];
        const Relation& rq = q_.edge(node, other);
        auto& l = narrowed[other];
        l.erase(std::remove_if(l.begin(), l.end(),
                               [&](const Candidate& x) {
                                 return x.field == c.field ||
                                        !relation_compatible(rq, doc_.relation(c.field, x.field));
                               }),
                l.end());
      }
      assigned_[node] = c.field;
      lists_.push_back(std::move(narrowed));
      descend(depth + 1, node_sum + c.fscore, edge_sum + gained);
      lists_.pop_back();
      assigned_[node] = kAbsent;
    }

    // Leave the node unassigned.
    std::vector<std::vector<Candidate>> unchanged = lists;
    unchanged[node].clear();
    lists_.push_back(std::move(unchanged));
    descend(depth + 1, node_sum, edge_sum);
    lists_.pop_back();
  }

  const Arg& q_;
  const DocumentIndex& doc_;
  const ScoreWeights& w_;
  std::size_t n_;
  std::size_t pivot_node_ = 0;
  double pivot_fscore_ = 0.0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> assigned_;
  std::deque<std::vector<std::vector<Candidate>>> lists_;  // references stay valid on push_back
  std::vector<std::size_t> best_assignment_;
  double best_score_ = -1.0;
};

std::size_t position_of(const DocumentIndex& doc, int field_id) {
  const auto& fields = doc.fields();
  if (field_id >= 0 && static_cast<std::size_t>(field_id) < fields.size() &&
      fields[field_id].field_id == field_id) {
    return static_cast<std::size_t>(field_id);
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].field_id == field_id) return i;
  }
  throw Error(ErrorCode::precondition, "unknown field id " + std::to_string(field_id));
}

MinedItem make_item(const Arg& q, const DocumentIndex& doc, const ScoreWeights& w,
                    const std::vector<std::size_t>& assignment) {
  MinedItem item;
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    NodeMatch m;
    m.q_node = static_cast<int>(i);
    if (assignment[i] != AssignmentSearch::kAbsent) {
      const Field& f = doc.fields()[assignment[i]];
      m.d_field = f.field_id;
      m.fscore = feature_score(q.node(i), f, w);
      if (q.node(i).selected) item.boxes.push_back(f.box());
    }
    item.matches.push_back(m);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      if (assignment[i] != AssignmentSearch::kAbsent && assignment[j] != AssignmentSearch::kAbsent) {
        s = relation_score(q.edge(i, j), doc.relation(assignment[i], assignment[j]));
      }
      item.edges.push_back({static_cast<int>(i), static_cast<int>(j), s});
    }
  }
  item.S = matching_score(item, q, w);
  return item;
}

}  // namespace

MinedItem assign_relations(const Arg& q, std::size_t pivot_node, int pivot_field,
                           const DocumentIndex& doc, const ScoreWeights& w,
                           std::span<const char> used) {
  if (pivot_node >= q.size()) {
    throw Error(ErrorCode::precondition, "assign_relations: unknown pivot node");
  }
  const std::size_t pos = position_of(doc, pivot_field);
  AssignmentSearch search(q, pivot_node, pos, doc, w, used);
  return make_item(q, doc, w, search.run());
}

TableResult mine_table(const Arg& q, const DocumentIndex& doc, const ScoreWeights& w) {
  w.validate();
  TableResult result;
  if (q.size() == 0) return result;
  const PivotSelection pivots = select_pivots(q, doc.fields());

  struct Slot {
    std::size_t pivot_pos;
    MinedItem item;
  };
  std::vector<char> used(doc.size(), 0);
  std::vector<Slot> slots;
  for (int fid : pivots.candidates) {
    const std::size_t pos = position_of(doc, fid);
    slots.push_back({pos, assign_relations(q, pivots.pivot_node, fid, doc, w)});
  }

  auto better = [](const MinedItem& a, const MinedItem& b) {
    if (a.S != b.S) return a.S > b.S;
    return a.reading_position() < b.reading_position();
  };
  auto stale = [&](const MinedItem& item) {
    for (const auto& m : item.matches) {
      if (m.d_field && used[position_of(doc, *m.d_field)]) return true;
    }
    return false;
  };

  while (!slots.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < slots.size(); ++i) {
      if (better(slots[i].item, slots[best].item)) best = i;
    }
    Slot& top = slots[best];
    if (used[top.pivot_pos]) {
      slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(best));
      continue;
    }
    if (stale(top.item)) {
      // Only fields still available; the new score can only be lower.
      top.item = assign_relations(q, pivots.pivot_node, doc.fields()[top.pivot_pos].field_id, doc,
                                  w, used);
      continue;
    }
    if (top.item.S < w.accept_threshold) break;
    for (const auto& m : top.item.matches) {
      if (m.d_field) used[position_of(doc, *m.d_field)] = 1;
    }
    result.items.push_back(std::move(top.item));
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(best));
  }

  std::stable_sort(result.items.begin(), result.items.end(), better);
  result.cs = confidence_score(result.items);
  return result;
}

TableResult mine_table(const Arg& q, const Document& doc, const ScoreWeights& w,
                       const Taxonomy& taxonomy) {
  DocumentIndex index(form_fields(doc, q.formation(), taxonomy));
  TableResult result = mine_table(q, index, w);
  result.doc_id = doc.doc_id;
  return result;
}

std::vector<RankedResult> rank_results(std::vector<RankedResult> results) {
  std::stable_sort(results.begin(), results.end(),
                   [](const RankedResult& a, const RankedResult& b) {
                     return a.result.cs > b.result.cs;
                   });
  return results;
}

}  // namespace tabmine
