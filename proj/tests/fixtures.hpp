#pragma once

#include <utility>
#include <vector>

#include "torchlight/heightmap.hpp"

namespace fixtures {

// Flat corridor with two side branches. From the marked source the
// reachable tiles sit at distances 1, 2, 3, 3 and 4.
inline torchlight::Heightmap corridor_map() {
  return torchlight::parse_heightmap("# # 0 #\n0 0 0 0\n# # # 0\n");
}

inline torchlight::GridPos corridor_source() { return {1, 0}; }

inline std::vector<std::pair<torchlight::GridPos, int>> corridor_distances() {
  return {{{1, 1}, 1}, {{1, 2}, 2}, {{0, 2}, 3}, {{1, 3}, 3}, {{2, 3}, 4}};
}

// 3x3 room with an elevation-2 tile (distance 5) and an elevation-1 tile
// (distance 4); the path to the far corner climbs over the lower step for a
// total of 6.
inline torchlight::Heightmap step_map() {
  return torchlight::parse_heightmap("0 0 0\n0 0 2\n0 1 0\n");
}

inline torchlight::GridPos step_source() { return {0, 0}; }

inline std::vector<std::pair<torchlight::GridPos, int>> step_distances() {
  return {{{0, 1}, 1}, {{0, 2}, 2}, {{1, 0}, 1}, {{1, 1}, 2},
          {{2, 0}, 2}, {{2, 1}, 4}, {{1, 2}, 5}, {{2, 2}, 6}};
}

inline torchlight::Heightmap corridor3() {
  return torchlight::parse_heightmap("0 0 0\n");
}

}  // namespace fixtures
