#include <iostream>

#include "climkg/embedding.hpp"
#include "climkg/geo.hpp"
#include "climkg/graph.hpp"

int main() {
  auto id = climkg::graph::node_id("1.0", "Platform", {{"name", "Terra"}});
  auto box = climkg::geo::bbox_to_polygon(0, 0, 1, 1);
  climkg::embed::HashEmbedder e;
  auto v = e.embed("sea surface temperature");
  bool ok = id.size() == 16 && box.area() > 0.99 && v.norm() > 0.99;
  std::cout << (ok ? "ok " : "bad ") << id << '\n';
  return ok ? 0 : 1;
}
