#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "climkg/enrich.hpp"
#include "climkg/error.hpp"

namespace climkg::enrich {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

std::vector<VariableCluster> collect(const std::vector<std::string>& names, DisjointSets& sets) {
  std::map<std::size_t, std::set<std::string>> groups;
  for (std::size_t i = 0; i < names.size(); ++i) groups[sets.find(i)].insert(names[i]);
  std::vector<VariableCluster> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) {
    VariableCluster c;
    c.representative = *members.begin();
    c.members = std::move(members);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const VariableCluster& a, const VariableCluster& b) { return a.representative < b.representative; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].cluster_id = static_cast<int>(i);
  return out;
}

}  // namespace

std::vector<VariableCluster> cluster_variables(const std::vector<CesmVariable>& vars, const SimilarityThresholds& t) {
  std::vector<std::string> names;
  names.reserve(vars.size());
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v.name).second) throw ValidationError("duplicate variable name: " + v.name);
    names.push_back(v.name);
  }
  DisjointSets sets(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (sets.find(i) == sets.find(j)) continue;
      if (pairwise_similar(vars[i], vars[j], t)) sets.unite(i, j);
    }
  }
  return collect(names, sets);
}

std::vector<VariableCluster> clusters_from_edges(const std::vector<std::string>& names,
                                                 const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], i).second) throw ValidationError("duplicate variable name: " + names[i]);
  }
  DisjointSets sets(names.size());
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) throw ValidationError("edge references unknown variable: " + a + " - " + b);
    sets.unite(ia->second, ib->second);
  }
  return collect(names, sets);
}

}  // namespace climkg::enrich
