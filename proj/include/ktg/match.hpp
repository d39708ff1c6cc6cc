#pragma once

#include <map>
#include <string>
#include <vector>

#include "ktg/ruleset.hpp"
#include "ktg/trigraph.hpp"

namespace ktg {

// An embedding of a fragment into a host trigraph. Every fragment dart maps
// to a host dart; a leg dart maps to the far end of its cut edge. Fragment
// free-loop components map to host loop instances (class + instance index).
struct Match {
  std::vector<DartId> dart_image;
  std::vector<std::pair<LoopClass, int>> loop_image;
  std::map<std::string, std::string> bindings;
};

// All embeddings of f into g respecting node types, edge kinds, orientations,
// labels and rotation. Deterministic order; complete.
std::vector<Match> match_sites(const LabelTrigraph& g, const Fragment& f);

}  // namespace ktg
