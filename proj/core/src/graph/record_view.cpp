#include "record_view.hpp"

#include <algorithm>

#include "climkg/text.hpp"

namespace climkg::graph::detail {

using nlohmann::json;

namespace {

std::string str(const json& j, const char* key) {
  if (!j.is_object()) return {};
  auto it = j.find(key);
  if (it == j.end()) return {};
  if (it->is_string()) return std::string(text::trim(it->get_ref<const std::string&>()));
  if (it->is_number()) return it->dump();
  return {};
}

std::string scalar(const json* j) {
  if (!j) return {};
  if (j->is_string()) return std::string(text::trim(j->get_ref<const std::string&>()));
  if (j->is_number()) return j->dump();
  return {};
}

// Iterates the value as a list: arrays item by item, anything else as one item.
template <class F>
void each(const json* j, F&& f) {
  if (!j) return;
  if (j->is_array()) {
    for (const auto& item : *j) f(item);
  } else if (!j->is_null()) {
    f(*j);
  }
}

template <class T, class Key>
void push_unique(std::vector<T>& v, T item, Key key) {
  auto k = text::to_lower(key(item));
  if (k.empty()) return;
  for (const auto& e : v) {
    if (text::to_lower(key(e)) == k) return;
  }
  v.push_back(std::move(item));
}

void push_name(std::vector<std::string>& v, std::string s) {
  push_unique(v, std::move(s), [](const std::string& x) { return x; });
}

ContactInfo person(const json& p) {
  ContactInfo c;
  if (p.is_string()) {
    c.name = std::string(text::trim(p.get<std::string>()));
    return c;
  }
  std::string first = str(p, "FirstName"), last = str(p, "LastName");
  c.name = text::trim(first + " " + last);
  if (c.name.empty()) c.name = str(p, "GroupName");
  if (auto it = p.find("Roles"); it != p.end() && it->is_array()) {
    for (const auto& r : *it) {
      if (r.is_string()) c.roles.push_back(r.get<std::string>());
    }
  }
  std::sort(c.roles.begin(), c.roles.end());
  if (auto ci = p.find("ContactInformation"); ci != p.end() && ci->is_object()) {
    if (auto mech = ci->find("ContactMechanisms"); mech != ci->end() && mech->is_array()) {
      for (const auto& m : *mech) {
        if (str(m, "Type") == "Email") {
          c.email = str(m, "Value");
          break;
        }
      }
    }
  }
  return c;
}

}  // namespace

std::string kind_from_rel(std::string_view rel) {
  if (rel.ends_with("/data#")) return "GET DATA";
  if (rel.ends_with("/browse#")) return "GET RELATED VISUALIZATION";
  if (rel.ends_with("/service#")) return "USE SERVICE API";
  if (rel.ends_with("/documentation#") || rel.ends_with("/metadata#")) return "VIEW RELATED INFORMATION";
  return "OTHER";
}

RecordView view_record(const ingest::HarmonizedRecord& r) {
  RecordView v;
  v.short_name = scalar(r.get("ShortName"));
  v.version = scalar(r.get("Version"));
  v.title = scalar(r.get("EntryTitle"));
  v.abstract = scalar(r.get("Abstract"));
  v.doi = scalar(r.get("DOI"));
  v.coordinate_system = scalar(r.get("CoordinateSystem"));
  v.processing_level = scalar(r.get("ProcessingLevel"));
  v.processing_level_description = scalar(r.get("ProcessingLevelDescription"));

  each(r.get("Platforms"), [&](const json& p) {
    PlatformInfo info;
    if (p.is_string()) {
      info.name = std::string(text::trim(p.get<std::string>()));
    } else {
      info.name = str(p, "ShortName");
      info.long_name = str(p, "LongName");
      info.type = str(p, "Type");
      each(p.is_object() && p.contains("Instruments") ? &p["Instruments"] : nullptr, [&](const json& i) {
        auto n = i.is_string() ? i.get<std::string>() : str(i, "ShortName");
        if (!n.empty()) push_name(info.instruments, n);
      });
      std::sort(info.instruments.begin(), info.instruments.end());
    }
    push_unique(v.platforms, std::move(info), [](const PlatformInfo& x) { return x.name; });
  });

  each(r.get("DataCenters"), [&](const json& dc) {
    NamedInfo org{str(dc, "ShortName"), str(dc, "LongName")};
    if (org.name.empty()) return;
    for (const char* key : {"ContactPersons", "ContactGroups"}) {
      each(dc.contains(key) ? &dc[key] : nullptr, [&](const json& p) {
        auto c = person(p);
        c.organization = org.name;
        push_unique(v.contacts, std::move(c), [](const ContactInfo& x) { return x.name; });
      });
    }
    push_unique(v.organizations, std::move(org), [](const NamedInfo& x) { return x.name; });
  });
  for (const char* key : {"DataCenter", "ArchiveCenter", "Organizations"}) {
    each(r.get(key), [&](const json& o) {
      if (o.is_string()) push_unique(v.organizations, NamedInfo{std::string(text::trim(o.get<std::string>())), ""},
                                     [](const NamedInfo& x) { return x.name; });
    });
  }
  for (const char* key : {"ContactPersons", "ContactGroups"}) {
    each(r.get(key), [&](const json& p) {
      push_unique(v.contacts, person(p), [](const ContactInfo& x) { return x.name; });
    });
  }
  each(r.get("Consortiums"), [&](const json& c) {
    if (c.is_string()) push_name(v.consortiums, std::string(text::trim(c.get<std::string>())));
  });
  each(r.get("Projects"), [&](const json& p) {
    NamedInfo info = p.is_string() ? NamedInfo{std::string(text::trim(p.get<std::string>())), ""}
                                   : NamedInfo{str(p, "ShortName"), str(p, "LongName")};
    push_unique(v.projects, std::move(info), [](const NamedInfo& x) { return x.name; });
  });

  each(r.get("ScienceKeywords"), [&](const json& k) {
    std::vector<std::string> parts;
    for (const char* key : {"Category", "Topic", "Term", "VariableLevel1", "VariableLevel2", "VariableLevel3",
                            "DetailedVariable"}) {
      auto s = str(k, key);
      if (!s.empty()) parts.push_back(s);
    }
    if (parts.empty()) return;
    KeywordInfo info{parts.back(), text::join(parts, " > "), str(k, "Topic")};
    if (!info.topic.empty()) push_name(v.categories, info.topic);
    push_unique(v.keywords, std::move(info), [](const KeywordInfo& x) { return x.path; });
  });
  if (v.categories.empty()) {
    each(r.get("ISOTopicCategories"), [&](const json& c) {
      if (c.is_string()) push_name(v.categories, std::string(text::trim(c.get<std::string>())));
    });
  }

  if (const json* ad = r.get("ArchiveAndDistributionInformation"); ad && ad->is_object()) {
    for (const char* key : {"FileDistributionInformation", "FileArchiveInformation"}) {
      each(ad->contains(key) ? &(*ad)[key] : nullptr, [&](const json& f) {
        auto fmt = str(f, "Format");
        if (!fmt.empty()) push_name(v.formats, fmt);
      });
    }
  }

  each(r.get("TemporalExtents"), [&](const json& t) {
    bool at_present = t.is_object() && t.value("EndsAtPresentFlag", false);
    each(t.is_object() && t.contains("RangeDateTimes") ? &t["RangeDateTimes"] : nullptr, [&](const json& rd) {
      TemporalInfo info{str(rd, "BeginningDateTime"), str(rd, "EndingDateTime"), at_present};
      if (info.end.empty()) info.ongoing = true;
      if (info.start.empty()) return;
      push_unique(v.temporal, std::move(info), [](const TemporalInfo& x) { return x.start + "|" + x.end; });
    });
    each(t.is_object() && t.contains("SingleDateTimes") ? &t["SingleDateTimes"] : nullptr, [&](const json& sd) {
      if (!sd.is_string()) return;
      auto s = std::string(text::trim(sd.get<std::string>()));
      push_unique(v.temporal, TemporalInfo{s, s, false}, [](const TemporalInfo& x) { return x.start + "|" + x.end; });
    });
  });
  if (v.temporal.empty()) {
    auto start = scalar(r.get("TimeStart"));
    if (!start.empty()) {
      auto end = scalar(r.get("TimeEnd"));
      v.temporal.push_back({start, end, end.empty()});
    }
  }

  each(r.get("Variables"), [&](const json& x) {
    VariableInfo info = x.is_string() ? VariableInfo{std::string(text::trim(x.get<std::string>())), "", ""}
                                      : VariableInfo{str(x, "Name"), str(x, "LongName"), str(x, "Units")};
    push_unique(v.variables, std::move(info), [](const VariableInfo& y) { return y.name + "|" + y.units; });
  });
  each(r.get("Stations"), [&](const json& s) {
    push_name(v.stations, s.is_string() ? std::string(text::trim(s.get<std::string>())) : str(s, "Name"));
  });

  each(r.get("RelatedUrls"), [&](const json& u) {
    LinkInfo l{str(u, "URL"), text::collapse_whitespace(str(u, "Type")), str(u, "Description")};
    push_unique(v.links, std::move(l), [](const LinkInfo& x) { return x.url; });
  });
  each(r.get("Links"), [&](const json& u) {
    LinkInfo l{str(u, "href"), kind_from_rel(str(u, "rel")), str(u, "title")};
    push_unique(v.links, std::move(l), [](const LinkInfo& x) { return x.url; });
  });

  each(r.get("LocationKeywords"), [&](const json& k) {
    if (k.is_string()) {
      push_name(v.location_names, std::string(text::trim(k.get<std::string>())));
      return;
    }
    std::string deepest;
    for (const char* key : {"Category", "Type", "Subregion1", "Subregion2", "Subregion3", "DetailedLocation"}) {
      auto s = str(k, key);
      if (!s.empty()) deepest = s;
    }
    push_name(v.location_names, deepest);
  });
  return v;
}

}  // namespace climkg::graph::detail
