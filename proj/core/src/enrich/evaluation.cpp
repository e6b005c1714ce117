#include <fstream>
#include <sstream>

#include "climkg/csv.hpp"
#include "climkg/enrich.hpp"
#include "climkg/error.hpp"

namespace climkg::enrich {

PredictionEval evaluate_predictions(const std::map<std::string, std::string>& predicted,
                                    const std::map<std::string, std::string>& truth,
                                    const std::vector<VariableCluster>& clusters) {
  std::vector<std::string> missing;
  for (const auto& [id, _] : predicted) {
    if (!truth.count(id)) missing.push_back("truth lacks " + id);
  }
  for (const auto& [id, _] : truth) {
    if (!predicted.count(id)) missing.push_back("prediction lacks " + id);
  }
  if (!missing.empty()) {
    std::string msg = "prediction and truth ids differ:";
    for (const auto& m : missing) msg += " " + m + ";";
    throw ValidationError(msg);
  }

  std::map<std::string, int> cluster_of;
  for (const auto& c : clusters) {
    for (const auto& m : c.members) cluster_of[m] = c.cluster_id;
  }
  // Names outside every cluster are their own group; compare by name then.
  auto same_group = [&](const std::string& a, const std::string& b) {
    if (a == b) return true;
    auto ia = cluster_of.find(a), ib = cluster_of.find(b);
    return ia != cluster_of.end() && ib != cluster_of.end() && ia->second == ib->second;
  };

  PredictionEval e;
  e.total = truth.size();
  if (e.total == 0) return e;
  std::size_t exact = 0, group = 0;
  for (const auto& [id, t] : truth) {
    const std::string& p = predicted.at(id);
    if (p == t) ++exact;
    if (same_group(p, t)) {
      ++group;
    } else {
      ++e.unmatched;
    }
  }
  e.exact_accuracy = static_cast<double>(exact) / static_cast<double>(e.total);
  e.group_accuracy = static_cast<double>(group) / static_cast<double>(e.total);
  e.error_reduction = exact < e.total ? (e.group_accuracy - e.exact_accuracy) / (1.0 - e.exact_accuracy) : 0.0;
  return e;
}

std::map<std::string, std::string> load_prediction_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto rows = csv::parse(ss.str());
  if (rows.empty()) throw ValidationError(path.string() + ": empty file");
  std::map<std::string, std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() == 1 && row.cells[0].empty()) continue;
    if (row.cells.size() != 2) {
      throw ValidationError(path.string() + ":" + std::to_string(row.line) + ": expected 2 columns");
    }
    if (!out.emplace(row.cells[0], row.cells[1]).second) {
      throw ValidationError(path.string() + ":" + std::to_string(row.line) + ": duplicate id " + row.cells[0]);
    }
  }
  return out;
}

}  // namespace climkg::enrich
