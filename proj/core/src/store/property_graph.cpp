#include <algorithm>
#include <set>

#include "climkg/error.hpp"
#include "climkg/store.hpp"
#include "climkg/text.hpp"

namespace climkg::store {

std::vector<std::string> searchable_tokens(const graph::Node& n) {
  std::set<std::string> tokens;
  for (const char* key : {"name", "title"}) {
    auto it = n.properties.find(key);
    if (it == n.properties.end() || !it->second.is_string()) continue;
    for (auto& t : text::word_tokens(it->second.get<std::string>())) tokens.insert(std::move(t));
  }
  return {tokens.begin(), tokens.end()};
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

PropertyGraph PropertyGraph::from_graph(graph::Graph g, graph::CsvLayout layout, std::string schema_version) {
  PropertyGraph pg;
  pg.graph_ = std::move(g);
  pg.layout_ = std::move(layout);
  pg.schema_version_ = std::move(schema_version);
  pg.index();
  return pg;
}

void PropertyGraph::index() {
  by_label_.clear();
  out_.clear();
  in_.clear();
  postings_.clear();
  node_tokens_.clear();
  vectors_.clear();
  for (const auto& [id, n] : graph_.nodes) {
    by_label_[n.label].push_back(id);
    auto tokens = searchable_tokens(n);
    for (const auto& t : tokens) postings_[t].push_back(id);
    node_tokens_[id] = std::move(tokens);
    if (n.embedding) vectors_[n.label].push_back(&n);
  }
  for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
    const auto& e = graph_.edges[i];
    out_[{e.start, e.type}].push_back(i);
    in_[{e.end, e.type}].push_back(i);
  }
  auto by_other = [&](bool outgoing) {
    return [this, outgoing](std::size_t a, std::size_t b) {
      const auto& ea = graph_.edges[a];
      const auto& eb = graph_.edges[b];
      const auto& oa = outgoing ? ea.end : ea.start;
      const auto& ob = outgoing ? eb.end : eb.start;
      return oa != ob ? oa < ob : a < b;
    };
  };
  for (auto& [_, v] : out_) std::sort(v.begin(), v.end(), by_other(true));
  for (auto& [_, v] : in_) std::sort(v.begin(), v.end(), by_other(false));
}

const graph::Node* PropertyGraph::node(std::string_view id) const {
  auto it = graph_.nodes.find(std::string(id));
  return it == graph_.nodes.end() ? nullptr : &it->second;
}

const std::vector<std::string>& PropertyGraph::ids(std::string_view label) const {
  static const std::vector<std::string> kEmpty;
  auto it = by_label_.find(label);
  return it == by_label_.end() ? kEmpty : it->second;
}

std::vector<std::string> PropertyGraph::labels() const {
  std::vector<std::string> out;
  for (const auto& [l, _] : by_label_) out.push_back(l);
  return out;
}

std::vector<const graph::Edge*> PropertyGraph::edges(std::string_view id, std::string_view type, Direction d) const {
  if (!node(id)) throw ValidationError("unknown node id " + std::string(id));
  const auto& adj = d == Direction::Out ? out_ : in_;
  std::vector<const graph::Edge*> out;
  auto it = adj.find(std::pair<std::string, std::string>(id, type));
  if (it == adj.end()) return out;
  for (auto i : it->second) out.push_back(&graph_.edges[i]);
  return out;
}

std::vector<const graph::Node*> PropertyGraph::neighbors(std::string_view id, std::string_view type,
                                                         Direction d) const {
  std::vector<const graph::Node*> out;
  for (const auto* e : edges(id, type, d)) out.push_back(node(d == Direction::Out ? e->end : e->start));
  return out;
}

std::vector<TextHit> PropertyGraph::text_search(std::string_view label, std::string_view query,
                                                std::size_t limit) const {
  std::set<std::string> qset;
  for (auto& t : text::word_tokens(query)) qset.insert(std::move(t));
  std::vector<std::string> q(qset.begin(), qset.end());
  std::set<std::string> candidates;
  for (const auto& t : q) {
    if (auto it = postings_.find(t); it != postings_.end()) candidates.insert(it->second.begin(), it->second.end());
  }
  std::vector<TextHit> hits;
  for (const auto& id : candidates) {
    const graph::Node* n = node(id);
    if (!label.empty() && n->label != label) continue;
    double s = jaccard(q, node_tokens_.at(id));
    if (s > 0.0) hits.push_back({n, s});
  }
  std::sort(hits.begin(), hits.end(), [](const TextHit& a, const TextHit& b) {
    return a.score != b.score ? a.score > b.score : a.node->id < b.node->id;
  });
  if (hits.size() > limit) hits.resize(limit);
  return hits;
}

const std::vector<const graph::Node*>& PropertyGraph::vectors(std::string_view label) const {
  static const std::vector<const graph::Node*> kEmpty;
  auto it = vectors_.find(label);
  return it == vectors_.end() ? kEmpty : it->second;
}

std::size_t PropertyGraph::vector_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : vectors_) n += v.size();
  return n;
}

graph::Manifest PropertyGraph::emit_csv(const std::filesystem::path& out_dir) const {
  return graph::emit_csv(graph_, layout_, out_dir, schema_version_);
}

}  // namespace climkg::store
