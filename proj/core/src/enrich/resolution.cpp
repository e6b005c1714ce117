#include <algorithm>

#include "climkg/enrich.hpp"
#include "climkg/error.hpp"
#include "climkg/resources.hpp"
#include "climkg/text.hpp"

namespace climkg::enrich {

using nlohmann::json;

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::Attribute: return "attribute";
    case MatchKind::Regex: return "regex";
    case MatchKind::None: break;
  }
  return "none";
}

namespace {

MatchKind match_kind_from_string(std::string_view s) {
  if (s == "attribute") return MatchKind::Attribute;
  if (s == "regex") return MatchKind::Regex;
  return MatchKind::None;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("resolution config lacks ") + key);
  return it->get<std::vector<std::string>>();
}

std::vector<std::regex> compile(const std::vector<std::string>& patterns) {
  std::vector<std::regex> out;
  for (const auto& p : patterns) {
    try {
      out.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw ValidationError("invalid resolution pattern '" + p + "': " + e.what());
    }
  }
  return out;
}

void push_unique(std::vector<std::string>& v, std::string s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return std::string(text::trim(v.get_ref<const std::string&>()));
  if (v.is_number() || v.is_boolean()) return v.dump();
  return {};
}

// Looks for any configured attribute among the record's fields, extras, and
// UMM AdditionalAttributes entries.
ResolutionEvidence from_attributes(const ingest::HarmonizedRecord& record, const std::vector<std::string>& names) {
  ResolutionEvidence ev;
  auto consider = [&](const std::string& key, const json& value) {
    for (const auto& name : names) {
      if (!text::iequals(key, name)) continue;
      auto v = scalar_text(value);
      if (v.empty()) continue;
      push_unique(ev.sentences, name + ": " + v);
      if (!ev.matched_attribute) ev.matched_attribute = name;
      ev.match_kind = MatchKind::Attribute;
    }
  };
  for (const auto& [k, f] : record.fields) consider(k, f.value);
  for (const auto& [k, f] : record.extra) consider(k, f.value);
  if (const json* attrs = record.get("AdditionalAttributes"); attrs && attrs->is_array()) {
    for (const auto& a : *attrs) {
      if (!a.is_object() || !a.contains("Name")) continue;
      const json& value = a.contains("Value") ? a["Value"] : a.value("Description", json());
      consider(a["Name"].get<std::string>(), value);
    }
  }
  return ev;
}

void collect_strings(const json& v, std::vector<std::string>& out) {
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array() || v.is_object()) {
    for (const auto& item : v) collect_strings(item, out);
  }
}

}  // namespace

ResolutionConfig ResolutionConfig::from_json(const json& j) {
  const json& r = j.contains("resolution") ? j.at("resolution") : j;
  ResolutionConfig c;
  c.spatial_attributes = string_list(r, "spatial_attributes");
  c.temporal_attributes = string_list(r, "temporal_attributes");
  c.spatial_patterns = string_list(r, "spatial_patterns");
  c.temporal_patterns = string_list(r, "temporal_patterns");
  c.text_fields = string_list(r, "text_fields");
  return c;
}

ResolutionConfig ResolutionConfig::builtin() {
  return from_json(json::parse(resources::get("enrichment.json")));
}

std::vector<std::string> split_sentences(std::string_view t) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto s = text::trim(t.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
    start = end + 1;
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    if (c == ';' || c == '\n') {
      flush(i);
    } else if (c == '.') {
      bool at_end = i + 1 == t.size();
      bool before_space = !at_end && (t[i + 1] == ' ' || t[i + 1] == '\t' || t[i + 1] == '\r' || t[i + 1] == '\n');
      if (at_end || before_space) flush(i);
    }
  }
  if (start < t.size()) flush(t.size());
  return out;
}

ResolutionExtractor::ResolutionExtractor(ResolutionConfig config)
    : config_(std::move(config)), spatial_(compile(config_.spatial_patterns)), temporal_(compile(config_.temporal_patterns)) {}

ResolutionEvidence ResolutionExtractor::from_text(const ingest::HarmonizedRecord& record,
                                                  const std::vector<std::regex>& patterns) const {
  ResolutionEvidence ev;
  for (const auto& field : config_.text_fields) {
    const json* v = record.get(field);
    if (!v) continue;
    std::vector<std::string> texts;
    collect_strings(*v, texts);
    for (const auto& t : texts) {
      for (auto& sentence : split_sentences(t)) {
        bool hit = std::any_of(patterns.begin(), patterns.end(),
                               [&](const std::regex& re) { return std::regex_search(sentence, re); });
        if (hit) push_unique(ev.sentences, std::move(sentence));
      }
    }
  }
  if (!ev.sentences.empty()) ev.match_kind = MatchKind::Regex;
  return ev;
}

ResolutionInfo ResolutionExtractor::extract(const ingest::HarmonizedRecord& record) const {
  ResolutionInfo info;
  info.spatial = from_attributes(record, config_.spatial_attributes);
  if (info.spatial.sentences.empty()) info.spatial = from_text(record, spatial_);
  info.temporal = from_attributes(record, config_.temporal_attributes);
  if (info.temporal.sentences.empty()) info.temporal = from_text(record, temporal_);
  return info;
}

ResolutionInfo extract_resolution(const ingest::HarmonizedRecord& record, const ResolutionConfig& config) {
  return ResolutionExtractor(config).extract(record);
}

namespace {

json evidence_to_json(const ResolutionEvidence& e) {
  return json{{"sentences", e.sentences},
              {"matched_attribute", e.matched_attribute ? json(*e.matched_attribute) : json(nullptr)},
              {"match_kind", std::string(to_string(e.match_kind))}};
}

ResolutionEvidence evidence_from_json(const json& j) {
  ResolutionEvidence e;
  e.sentences = j.value("sentences", std::vector<std::string>{});
  if (auto it = j.find("matched_attribute"); it != j.end() && it->is_string()) e.matched_attribute = it->get<std::string>();
  e.match_kind = match_kind_from_string(j.value("match_kind", std::string("none")));
  return e;
}

}  // namespace

json to_json(const ResolutionInfo& info) {
  return json{{"spatial", evidence_to_json(info.spatial)}, {"temporal", evidence_to_json(info.temporal)}};
}

ResolutionInfo resolution_from_json(const json& j) {
  ResolutionInfo r;
  r.spatial = evidence_from_json(j.at("spatial"));
  r.temporal = evidence_from_json(j.at("temporal"));
  return r;
}

}  // namespace climkg::enrich
