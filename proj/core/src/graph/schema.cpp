#include <algorithm>

#include "climkg/error.hpp"
#include "climkg/graph.hpp"

namespace climkg::graph {

std::string_view type_name(PropType t) {
  switch (t) {
    case PropType::String: return "String";
    case PropType::Long: return "Long";
    case PropType::Double: return "Double";
    case PropType::Bool: return "Bool";
    case PropType::StringArray: return "String[]";
  }
  return "String";
}

PropType type_from_name(std::string_view s) {
  for (auto t : {PropType::String, PropType::Long, PropType::Double, PropType::Bool, PropType::StringArray}) {
    if (s == type_name(t)) return t;
  }
  throw ValidationError("unknown column type '" + std::string(s) + "'");
}

namespace {

constexpr auto S = PropType::String;
constexpr auto L = PropType::Long;
constexpr auto A = PropType::StringArray;

LabelSpec make(std::string name, std::vector<PropertySpec> props, std::vector<std::string> key, bool emb,
               bool workflow = false) {
  return LabelSpec{std::move(name), std::move(props), std::move(key), emb, workflow};
}

}  // namespace

GraphSchema GraphSchema::builtin(bool embed_cesm_variable) {
  GraphSchema g;
  g.labels_ = {
      make("Dataset",
           {{"concept_id", S}, {"short_name", S}, {"version", S}, {"title", S}, {"abstract", S}, {"doi", S},
            {"scope", S}, {"countries", A}, {"continents", A}, {"tokens", A}},
           {"concept_id"}, false),
      make("DataCategory", {{"name", S}}, {"name"}, true),
      make("DataFormat", {{"name", S}}, {"name"}, false),
      make("CoordinateSystem", {{"name", S}}, {"name"}, false),
      make("Location",
           {{"name", S}, {"geometry_hash", S}, {"wkt", S}, {"scope", S}, {"countries", A}, {"continents", A}},
           {"geometry_hash", "name"}, true),
      make("Station", {{"name", S}}, {"name"}, false),
      make("Organization", {{"name", S}, {"long_name", S}}, {"name"}, false),
      make("Platform", {{"name", S}, {"long_name", S}, {"type", S}, {"instruments", A}}, {"name"}, false),
      make("Consortium", {{"name", S}}, {"name"}, false),
      make("TemporalExtent", {{"start", S}, {"end", S}, {"ongoing", PropType::Bool}}, {"start", "end"}, false),
      make("Variable", {{"dataset", S}, {"name", S}, {"long_name", S}, {"units", S}}, {"dataset", "name", "units"},
           true),
      make("CESMVariable", {{"name", S}, {"description", S}, {"component", S}, {"units", S}, {"cluster", L}},
           {"name", "component"}, embed_cesm_variable),
      make("Component", {{"name", S}, {"long_name", S}}, {"name"}, false),
      make("SpatialResolution", {{"text", S}, {"source", S}}, {"text"}, true),
      make("TemporalResolution", {{"text", S}, {"source", S}}, {"text"}, true),
      make("ProcessingLevel", {{"name", S}, {"description", S}}, {"name"}, false),
      make("Link", {{"url", S}, {"kind", S}, {"title", S}}, {"url"}, false),
      make("Project", {{"name", S}, {"long_name", S}}, {"name"}, false),
      make("ScienceKeyword", {{"name", S}, {"path", S}}, {"path"}, true),
      make("Contact", {{"name", S}, {"roles", A}, {"email", S}}, {"name"}, false),
  };
  for (const char* w : {"SurrogateModelingWorkflow", "HybridMLPhysicsWorkflow", "EquationDiscoveryWorkflow",
                        "ParameterizationBenchmark", "UncertaintyQuantification", "ParameterInferenceWorkflow",
                        "SubseasonalForecastingWorkflow", "TransferLearningWorkflow"}) {
    g.labels_.push_back(make(w, {{"name", S}, {"description", S}}, {"name"}, true, true));
  }

  auto from_dataset = [&](const char* type, const char* to) { g.edges_.push_back({type, "Dataset", to, {}}); };
  from_dataset("hasDataCategory", "DataCategory");
  from_dataset("hasDataFormat", "DataFormat");
  from_dataset("usesCoordinateSystem", "CoordinateSystem");
  from_dataset("hasLocation", "Location");
  from_dataset("hasStation", "Station");
  from_dataset("hasOrganization", "Organization");
  from_dataset("hasPlatform", "Platform");
  from_dataset("hasConsortium", "Consortium");
  from_dataset("hasTemporalExtent", "TemporalExtent");
  from_dataset("hasVariable", "Variable");
  g.edges_.push_back({"hasCESMVariable", "Dataset", "CESMVariable", {{"confidence", PropType::Double}}});
  from_dataset("hasSpatialResolution", "SpatialResolution");
  from_dataset("hasTemporalResolution", "TemporalResolution");
  from_dataset("hasProcessingLevel", "ProcessingLevel");
  from_dataset("hasLink", "Link");
  from_dataset("hasProject", "Project");
  from_dataset("hasScienceKeyword", "ScienceKeyword");
  from_dataset("hasContact", "Contact");
  g.edges_.push_back({"belongsToComponent", "CESMVariable", "Component", {}});
  g.edges_.push_back({"describesVariable", "ScienceKeyword", "CESMVariable", {{"confidence", PropType::Double}}});
  g.edges_.push_back({"operatesAtLocation", "Platform", "Location", {}});
  g.edges_.push_back({"worksForOrganization", "Contact", "Organization", {}});
  g.edges_.push_back({"belongsToConsortium", "Organization", "Consortium", {}});
  g.edges_.push_back({"similarCESMVariables", "CESMVariable", "CESMVariable", {}});
  return g;
}

const LabelSpec* GraphSchema::label(std::string_view name) const {
  auto it = std::find_if(labels_.begin(), labels_.end(), [&](const LabelSpec& l) { return l.name == name; });
  return it == labels_.end() ? nullptr : &*it;
}

const EdgeSpec* GraphSchema::edge(std::string_view type) const {
  auto it = std::find_if(edges_.begin(), edges_.end(), [&](const EdgeSpec& e) { return e.type == type; });
  return it == edges_.end() ? nullptr : &*it;
}

bool GraphSchema::embedding_enabled(std::string_view name) const {
  const LabelSpec* l = label(name);
  return l && l->embedding;
}

std::vector<std::string> GraphSchema::label_names() const {
  std::vector<std::string> out;
  for (const auto& l : labels_) out.push_back(l.name);
  return out;
}

void GraphSchema::set_natural_key(const std::string& name, std::vector<std::string> keys) {
  auto it = std::find_if(labels_.begin(), labels_.end(), [&](const LabelSpec& l) { return l.name == name; });
  if (it == labels_.end()) throw ValidationError("natural key for unknown label " + name);
  if (keys.empty()) throw ValidationError("empty natural key for " + name);
  for (const auto& k : keys) {
    bool declared = std::any_of(it->properties.begin(), it->properties.end(),
                                [&](const PropertySpec& p) { return p.name == k; });
    if (!declared) throw ValidationError("natural key " + name + "." + k + " is not a property");
  }
  it->natural_key = std::move(keys);
}

}  // namespace climkg::graph
