#include <spdlog/spdlog.h>

#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "climkg/error.hpp"
#include "climkg/ingest.hpp"
#include "climkg/text.hpp"

namespace climkg::ingest {

using nlohmann::json;

std::string_view to_string(Provenance p) { return p == Provenance::Umm ? "UMM" : "JSON"; }

void validate(const RawRecordPair& pair) {
  if (text::trim(pair.concept_id).empty()) throw ValidationError("record pair with empty concept_id");
  if (!pair.json_doc && !pair.umm_doc) {
    throw ValidationError("record pair " + pair.concept_id + " has neither a JSON nor a UMM document");
  }
}

bool is_non_empty(const json& value) {
  switch (value.type()) {
    case json::value_t::null:
    case json::value_t::discarded:
      return false;
    case json::value_t::string:
      return !text::trim(value.get_ref<const std::string&>()).empty();
    case json::value_t::array:
    case json::value_t::object:
      return !value.empty();
    default:
      return true;
  }
}

namespace {

const json* lookup(const std::optional<Document>& doc, std::string_view dotted) {
  if (!doc || dotted.empty()) return nullptr;
  const json* node = &*doc;
  for (const auto& part : text::split(dotted, '.')) {
    if (!node->is_object()) return nullptr;
    auto it = node->find(part);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node;
}

std::string head(std::string_view dotted) { return std::string(dotted.substr(0, dotted.find('.'))); }

std::optional<FieldValue> prefer(const json* umm, const json* js) {
  if (umm && is_non_empty(*umm)) return FieldValue{*umm, Provenance::Umm};
  if (js && is_non_empty(*js)) return FieldValue{*js, Provenance::Json};
  return std::nullopt;
}

}  // namespace

const json* HarmonizedRecord::get(std::string_view attribute) const {
  auto it = fields.find(std::string(attribute));
  return it == fields.end() ? nullptr : &it->second.value;
}

HarmonizedRecord merge_records(const RawRecordPair& pair, const Schema& schema) {
  validate(pair);
  HarmonizedRecord out;
  out.concept_id = std::string(text::trim(pair.concept_id));
  out.schema_version = schema.version;

  std::set<std::string> mapped_umm;
  std::set<std::string> mapped_json;
  for (const auto& attr : schema.attributes) {
    if (!attr.umm_key.empty()) mapped_umm.insert(head(attr.umm_key));
    if (!attr.json_key.empty()) mapped_json.insert(head(attr.json_key));
    if (auto v = prefer(lookup(pair.umm_doc, attr.umm_key), lookup(pair.json_doc, attr.json_key))) {
      out.fields.emplace(attr.name, std::move(*v));
    }
  }

  // Unmapped keys keep the same preference law, matched by literal key.
  std::set<std::string> extra_keys;
  if (pair.umm_doc && pair.umm_doc->is_object()) {
    for (const auto& [k, _] : pair.umm_doc->items()) {
      if (!mapped_umm.count(k)) extra_keys.insert(k);
    }
  }
  if (pair.json_doc && pair.json_doc->is_object()) {
    for (const auto& [k, _] : pair.json_doc->items()) {
      if (!mapped_json.count(k)) extra_keys.insert(k);
    }
  }
  for (const auto& k : extra_keys) {
    const json* umm = (pair.umm_doc && !mapped_umm.count(k)) ? lookup(pair.umm_doc, k) : nullptr;
    const json* js = (pair.json_doc && !mapped_json.count(k)) ? lookup(pair.json_doc, k) : nullptr;
    if (auto v = prefer(umm, js)) out.extra.emplace(k, std::move(*v));
  }
  return out;
}

HarmonizeResult harmonize_corpus(const std::vector<RawRecordPair>& pairs, const Schema& schema) {
  HarmonizeResult result;
  std::map<std::string, HarmonizedRecord> by_id;
  for (const auto& pair : pairs) {
    auto record = merge_records(pair, schema);
    auto [it, inserted] = by_id.try_emplace(record.concept_id, record);
    if (!inserted) {
      result.warnings.push_back("duplicate concept_id " + record.concept_id + " (last occurrence kept)");
      spdlog::warn("harmonize: {}", result.warnings.back());
      it->second = std::move(record);
    }
  }
  result.records.reserve(by_id.size());
  for (auto& [_, r] : by_id) result.records.push_back(std::move(r));
  return result;
}

namespace {

json field_to_json(const FieldValue& f) {
  return json{{"provenance", std::string(to_string(f.provenance))}, {"value", f.value}};
}

FieldValue field_from_json(const json& j) {
  const auto& p = j.at("provenance").get_ref<const std::string&>();
  if (p != "UMM" && p != "JSON") throw ValidationError("unknown provenance " + p);
  return FieldValue{j.at("value"), p == "UMM" ? Provenance::Umm : Provenance::Json};
}

}  // namespace

json to_json(const HarmonizedRecord& record) {
  json fields = json::object();
  for (const auto& [k, v] : record.fields) fields[k] = field_to_json(v);
  json extra = json::object();
  for (const auto& [k, v] : record.extra) extra[k] = field_to_json(v);
  return json{{"concept_id", record.concept_id},
              {"fields", std::move(fields)},
              {"extra", std::move(extra)},
              {"schema_version", record.schema_version}};
}

HarmonizedRecord record_from_json(const json& j) {
  HarmonizedRecord r;
  r.concept_id = j.at("concept_id").get<std::string>();
  r.schema_version = j.value("schema_version", std::string());
  for (const auto& [k, v] : j.at("fields").items()) r.fields.emplace(k, field_from_json(v));
  if (auto it = j.find("extra"); it != j.end()) {
    for (const auto& [k, v] : it->items()) r.extra.emplace(k, field_from_json(v));
  }
  return r;
}

void write_jsonl(std::ostream& out, const std::vector<HarmonizedRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<HarmonizedRecord> read_jsonl(std::istream& in) {
  std::vector<HarmonizedRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ValidationError("harmonized record on line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace climkg::ingest
