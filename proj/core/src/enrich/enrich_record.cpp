#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "climkg/enrich.hpp"
#include "climkg/error.hpp"
#include "climkg/text.hpp"

namespace climkg::enrich {

using nlohmann::json;

namespace {

void append_text(const json* v, std::vector<std::string>& out) {
  if (!v) return;
  if (v->is_string()) {
    out.push_back(v->get<std::string>());
  } else if (v->is_array()) {
    for (const auto& item : *v) append_text(&item, out);
  }
}

void append_keys(const json* v, std::initializer_list<const char*> keys, std::vector<std::string>& out) {
  if (!v) return;
  if (v->is_array()) {
    for (const auto& item : *v) append_keys(&item, keys, out);
    return;
  }
  if (v->is_string()) {
    out.push_back(v->get<std::string>());
    return;
  }
  if (!v->is_object()) return;
  for (const char* k : keys) {
    if (auto it = v->find(k); it != v->end() && it->is_string()) out.push_back(it->get<std::string>());
  }
}

}  // namespace

std::vector<std::string> inference_segments(const ingest::HarmonizedRecord& r) {
  std::vector<std::string> out;
  append_text(r.get("EntryTitle"), out);
  append_text(r.get("Abstract"), out);
  append_keys(r.get("Variables"), {"Name", "LongName", "Description"}, out);
  append_keys(r.get("ScienceKeywords"), {"Term", "VariableLevel1", "VariableLevel2", "VariableLevel3"}, out);
  const json* platforms = r.get("Platforms");
  append_keys(platforms, {"ShortName", "LongName"}, out);
  if (platforms && platforms->is_array()) {
    for (const auto& p : *platforms) {
      if (p.is_object() && p.contains("Instruments")) append_keys(&p["Instruments"], {"ShortName", "LongName"}, out);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const std::string& s) { return text::trim(s).empty(); }),
            out.end());
  return out;
}

EnrichedRecord enrich_record(const ingest::HarmonizedRecord& record, geo::GeoFootprint footprint,
                             const ResolutionExtractor& resolution, const std::vector<std::string>& vocabulary,
                             VariableClassifier& classifier, const InferenceConfig& config) {
  EnrichedRecord out;
  out.record = record;
  out.footprint = std::move(footprint);
  out.resolution = resolution.extract(record);

  std::vector<std::string> ngrams;
  for (const auto& segment : inference_segments(record)) {
    auto g = generate_ngrams(segment, config.n_min, config.n_max);
    ngrams.insert(ngrams.end(), std::make_move_iterator(g.begin()), std::make_move_iterator(g.end()));
  }
  out.tokens = filter_climate_tokens(ngrams, vocabulary, config.cap);

  std::map<std::string, CesmLink> best;
  for (const auto& token : out.tokens) {
    auto p = classifier.classify(token);
    if (p.confidence < config.confidence_threshold) continue;
    auto [it, fresh] = best.try_emplace(p.name, CesmLink{p.name, p.confidence, token});
    if (!fresh && p.confidence > it->second.confidence) it->second = CesmLink{p.name, p.confidence, token};
  }
  for (auto& [_, link] : best) out.cesm_links.push_back(std::move(link));
  return out;
}

json to_json(const EnrichedRecord& r) {
  json links = json::array();
  for (const auto& l : r.cesm_links) {
    links.push_back({{"name", l.name}, {"confidence", l.confidence}, {"evidence", l.evidence}});
  }
  return json{{"record", ingest::to_json(r.record)},
              {"footprint", geo::to_json(r.footprint)},
              {"resolution", to_json(r.resolution)},
              {"tokens", r.tokens},
              {"cesm_links", std::move(links)}};
}

EnrichedRecord enriched_from_json(const json& j) {
  try {
    EnrichedRecord r;
    r.record = ingest::record_from_json(j.at("record"));
    r.footprint = geo::footprint_from_json(j.at("footprint"));
    r.resolution = resolution_from_json(j.at("resolution"));
    r.tokens = j.value("tokens", std::vector<std::string>{});
    for (const auto& l : j.value("cesm_links", json::array())) {
      r.cesm_links.push_back({l.at("name").get<std::string>(), l.at("confidence").get<double>(),
                              l.value("evidence", std::string())});
    }
    std::sort(r.cesm_links.begin(), r.cesm_links.end(),
              [](const CesmLink& a, const CesmLink& b) { return a.name < b.name; });
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed enriched record: ") + e.what());
  }
}

void write_jsonl(std::ostream& out, const std::vector<EnrichedRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<EnrichedRecord> read_enriched_jsonl(std::istream& in) {
  std::vector<EnrichedRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(enriched_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ValidationError("enriched line " + std::to_string(n) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("enriched line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace climkg::enrich
