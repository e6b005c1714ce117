#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "climkg/enrich.hpp"
#include "climkg/resources.hpp"
#include "climkg/text.hpp"

namespace climkg::enrich {

namespace {

std::vector<std::string> ngram_words(std::string_view t) {
  std::vector<std::string> words;
  for (auto& w : text::split_whitespace(t)) {
    auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
    std::size_t b = 0, e = w.size();
    while (b < e && is_punct(w[b])) ++b;
    while (e > b && is_punct(w[e - 1])) --e;
    if (b < e) words.push_back(text::to_lower(std::string_view(w).substr(b, e - b)));
  }
  return words;
}

}  // namespace

std::vector<std::string> generate_ngrams(std::string_view t, std::size_t n_min, std::size_t n_max) {
  std::vector<std::string> out;
  if (n_min == 0) n_min = 1;
  auto words = ngram_words(t);
  for (std::size_t n = n_min; n <= n_max && n <= words.size(); ++n) {
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      std::string g = words[i];
      for (std::size_t k = 1; k < n; ++k) {
        g += ' ';
        g += words[i + k];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<std::string> filter_climate_tokens(const std::vector<std::string>& ngrams,
                                               const std::vector<std::string>& vocabulary, std::size_t cap) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& g : ngrams) {
    if (out.size() >= cap) break;
    if (seen.count(g)) continue;
    bool hit = false;
    for (const auto& word : text::split_whitespace(g)) {
      hit = std::any_of(vocabulary.begin(), vocabulary.end(),
                        [&](const std::string& stem) { return !stem.empty() && text::starts_with_icase(word, stem); });
      if (hit) break;
    }
    if (hit) {
      seen.insert(g);
      out.push_back(g);
    }
  }
  return out;
}

std::vector<std::string> parse_vocabulary(std::string_view t) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& line : text::split(t, '\n')) {
    auto s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto stem = text::to_lower(s);
    if (seen.insert(stem).second) out.push_back(std::move(stem));
  }
  return out;
}

std::vector<std::string> builtin_vocabulary() { return parse_vocabulary(resources::get("climate_vocabulary.txt")); }

}  // namespace climkg::enrich
