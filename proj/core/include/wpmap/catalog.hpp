#pragma once

#include <string>
#include <vector>

#include "wpmap/manifold.hpp"

namespace wpmap {

// Catalog manifolds addressable by name:
//   "euclidean:<n>", "polar2", "sphere2", "hyperbolic2", "heisenberg3",
//   "line", "circle", "interval(a,b)".
// Chart boxes exclude coordinate singularities by a fixed margin.
ChartManifold catalog_manifold(const std::string& name);

bool is_catalog_manifold(const std::string& name);

// Alphabetized names for `list` (the interval entry is shown generically).
std::vector<std::string> catalog_names();

}  // namespace wpmap
