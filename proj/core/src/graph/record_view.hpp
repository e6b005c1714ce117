#pragma once

#include <optional>
#include <string>
#include <vector>

#include "climkg/ingest.hpp"

namespace climkg::graph::detail {

struct PlatformInfo {
  std::string name, long_name, type;
  std::vector<std::string> instruments;
};

struct ContactInfo {
  std::string name, email;
  std::vector<std::string> roles;
  std::optional<std::string> organization;  // set for contacts listed under a data center
};

struct NamedInfo {
  std::string name, long_name;
};

struct KeywordInfo {
  std::string name, path, topic;
};

struct TemporalInfo {
  std::string start, end;
  bool ongoing = false;
};

struct VariableInfo {
  std::string name, long_name, units;
};

struct LinkInfo {
  std::string url, kind, title;
};

/// Entities a harmonized record mentions, read from either source layout.
struct RecordView {
  std::string short_name, version, title, abstract, doi;
  std::string coordinate_system;
  std::string processing_level, processing_level_description;
  std::vector<PlatformInfo> platforms;
  std::vector<NamedInfo> organizations;
  std::vector<ContactInfo> contacts;
  std::vector<std::string> consortiums;
  std::vector<NamedInfo> projects;
  std::vector<KeywordInfo> keywords;
  std::vector<std::string> categories;
  std::vector<std::string> formats;
  std::vector<TemporalInfo> temporal;
  std::vector<VariableInfo> variables;
  std::vector<std::string> stations;
  std::vector<LinkInfo> links;
  std::vector<std::string> location_names;
};

RecordView view_record(const ingest::HarmonizedRecord& record);

/// Link kind from a JSON-feed `rel` URI.
std::string kind_from_rel(std::string_view rel);

}  // namespace climkg::graph::detail
