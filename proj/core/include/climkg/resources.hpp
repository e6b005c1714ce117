#pragma once

#include <string_view>

namespace climkg::resources {

/// Default configuration files compiled into the library, by file name
/// (`schema.json`, `enrichment.json`, `climate_vocabulary.txt`).
std::string_view get(std::string_view name);

}  // namespace climkg::resources
