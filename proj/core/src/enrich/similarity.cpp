#include <algorithm>
#include <cctype>
#include <tuple>

#include "climkg/enrich.hpp"
#include "climkg/text.hpp"

namespace climkg::enrich {

namespace {

bool is_component_code(std::string_view word) {
  for (auto c : kAllComponents) {
    if (word == to_string(c)) return true;
  }
  return false;
}

struct Block {
  std::size_t i = 0, j = 0, size = 0;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi). Scans i then j and
// keeps the first strictly longer run, so ties resolve to the earliest i, then j.
Block longest_match(std::string_view a, std::size_t alo, std::size_t ahi, std::string_view b, std::size_t blo,
                    std::size_t bhi, std::vector<std::size_t>& prev, std::vector<std::size_t>& cur) {
  Block best{alo, blo, 0};
  std::fill(prev.begin() + blo, prev.begin() + bhi + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      std::size_t k = 0;
      if (a[i] == b[j]) k = (j > blo ? prev[j] : 0) + 1;
      cur[j + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    // prev[j] holds the run ending at (i-1, j-1).
    std::copy(cur.begin() + blo, cur.begin() + bhi + 1, prev.begin() + blo);
  }
  return best;
}

}  // namespace

std::string normalize_description(std::string_view raw) {
  std::string_view t = text::trim(raw);
  // A leading upper-case component code followed by ':', '-' or whitespace.
  std::size_t n = 0;
  while (n < t.size() && std::isupper(static_cast<unsigned char>(t[n]))) ++n;
  if (n > 0 && n < t.size() && is_component_code(t.substr(0, n))) {
    char sep = t[n];
    if (sep == ':' || sep == '-' || std::isspace(static_cast<unsigned char>(sep))) {
      t = t.substr(n + 1);
    }
  }
  std::string out = text::collapse_whitespace(text::to_lower(t));
  auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  std::size_t b = 0, e = out.size();
  while (b < e && (is_punct(out[b]) || out[b] == ' ')) ++b;
  while (e > b && (is_punct(out[e - 1]) || out[e - 1] == ' ')) --e;
  return out.substr(b, e - b);
}

std::size_t matching_characters(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> stack{{0, a.size(), 0, b.size()}};
  std::size_t total = 0;
  while (!stack.empty()) {
    auto [alo, ahi, blo, bhi] = stack.back();
    stack.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    Block m = longest_match(a, alo, ahi, b, blo, bhi, prev, cur);
    if (m.size == 0) continue;
    total += m.size;
    stack.emplace_back(m.i + m.size, ahi, m.j + m.size, bhi);
    stack.emplace_back(alo, m.i, blo, m.j);
  }
  return total;
}

double similarity_ratio(std::string_view a, std::string_view b) {
  std::size_t len = a.size() + b.size();
  if (len == 0) return 1.0;
  return 2.0 * static_cast<double>(matching_characters(a, b)) / static_cast<double>(len);
}

namespace {

// Ratio can never exceed 2*min/(|a|+|b|).
bool may_reach(std::string_view a, std::string_view b, double threshold) {
  std::size_t len = a.size() + b.size();
  if (len == 0) return true;
  return 2.0 * static_cast<double>(std::min(a.size(), b.size())) / static_cast<double>(len) >= threshold;
}

}  // namespace

bool pairwise_similar(const CesmVariable& x, const CesmVariable& y, const SimilarityThresholds& t) {
  const CesmVariable& a = x.name <= y.name ? x : y;
  const CesmVariable& b = x.name <= y.name ? y : x;
  if (may_reach(a.name, b.name, t.name) && similarity_ratio(a.name, b.name) >= t.name) return true;
  std::string da = normalize_description(a.description);
  std::string db = normalize_description(b.description);
  return may_reach(da, db, t.description) && similarity_ratio(da, db) >= t.description;
}

}  // namespace climkg::enrich
