#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "torchlight/heightmap.hpp"

namespace torchlight {

struct LightParams {
  int l_torch = 14;
  int l_min = 8;
};

inline void validate(const LightParams& p) {
  if (p.l_torch < 1 || p.l_min < 1 || p.l_min > p.l_torch) {
    throw std::invalid_argument("light params require 1 <= l_min <= l_torch");
  }
}

/// A block (row, col, k) is empty iff it lies at or above the floor level of
/// its column; wall columns are solid, as is everything out of bounds.
inline bool block_empty(const Heightmap& map, int row, int col, int k) {
  if (!map.in_bounds(row, col)) return false;
  int z = map.cell(row, col);
  return z != Heightmap::kWall && k >= z;
}

struct DistanceField {
  static constexpr int kUnreachable = -1;

  int source = 0;               // tile index
  std::vector<int> dist;        // per tile index; kUnreachable beyond the cap

  bool reachable(int tile) const { return dist[static_cast<std::size_t>(tile)] >= 0; }
};

namespace detail {

// BFS through the 6-connected empty-block graph, seeded at the floor blocks
// of the given tiles. Returns the distance to each tile's floor block, -1
// where farther than the cap. Shortest paths never rise above the highest
// floor level (empty space is upward-closed, so higher detours only add
// moves); one spare layer keeps the slab indexing simple.
inline std::vector<int> floor_block_distances(const Heightmap& map, const TileIndex& tiles,
                                              const std::vector<int>& source_tiles, int cap) {
  const int w = map.width();
  const int h = map.height();
  const int levels = map.max_elevation() + 2;
  const int effective_cap = cap < 0 ? w * h * levels : cap;

  auto block_id = [&](int r, int c, int k) {
    return (static_cast<std::size_t>(r) * w + c) * levels + k;
  };

  std::vector<int> dist(static_cast<std::size_t>(w) * h * levels, -1);
  std::deque<std::array<int, 3>> queue;
  for (int t : source_tiles) {
    GridPos s = tiles.site(t);
    int k = map.cell(s.row, s.col);
    if (dist[block_id(s.row, s.col, k)] < 0) {
      dist[block_id(s.row, s.col, k)] = 0;
      queue.push_back({s.row, s.col, k});
    }
  }

  while (!queue.empty()) {
    auto [r, c, k] = queue.front();
    queue.pop_front();
    int d = dist[block_id(r, c, k)];
    if (d >= effective_cap) continue;
    constexpr int kSteps[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                  {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    for (const auto& step : kSteps) {
      int nr = r + step[0];
      int nc = c + step[1];
      int nk = k + step[2];
      if (nk < 0 || nk >= levels) continue;
      if (!block_empty(map, nr, nc, nk)) continue;
      auto id = block_id(nr, nc, nk);
      if (dist[id] < 0) {
        dist[id] = d + 1;
        queue.push_back({nr, nc, nk});
      }
    }
  }

  std::vector<int> out(static_cast<std::size_t>(tiles.n()), DistanceField::kUnreachable);
  for (int t = 0; t < tiles.n(); ++t) {
    GridPos s = tiles.site(t);
    out[static_cast<std::size_t>(t)] = dist[block_id(s.row, s.col, map.cell(s.row, s.col))];
  }
  return out;
}

}  // namespace detail

/// Distances from one tile to every tile, truncated at `cap` steps
/// (cap < 0 means unbounded).
inline DistanceField distance_field(const Heightmap& map, const TileIndex& tiles, GridPos source,
                                    int cap) {
  if (!map.in_bounds(source.row, source.col) || map.wall(source.row, source.col)) {
    throw std::invalid_argument("distance source must be a non-wall tile");
  }
  DistanceField field;
  field.source = tiles.index_of(source.row, source.col);
  field.dist = detail::floor_block_distances(map, tiles, {field.source}, cap);
  return field;
}

inline DistanceField distance_field(const Heightmap& map, const TileIndex& tiles, int source,
                                    int cap) {
  if (source < 0 || source >= tiles.n()) throw std::invalid_argument("source tile out of range");
  return distance_field(map, tiles, tiles.site(source), cap);
}

/// Binary matrix D with d_ij = 1 iff a torch on tile j lights tile i.
/// Symmetric with unit diagonal; rows are stored as sorted index lists.
class CoverageMatrix {
 public:
  explicit CoverageMatrix(std::vector<std::vector<int>> rows) : rows_(std::move(rows)) {}

  int n() const { return static_cast<int>(rows_.size()); }

  const std::vector<int>& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

  int row_sum(int i) const { return static_cast<int>(rows_[static_cast<std::size_t>(i)].size()); }

  bool at(int i, int j) const {
    const auto& r = rows_[static_cast<std::size_t>(i)];
    return std::binary_search(r.begin(), r.end(), j);
  }

  // Dx for a binary selection vector.
  std::vector<int> times(const std::vector<int>& x) const {
    if (static_cast<int>(x.size()) != n()) {
      throw std::invalid_argument("selection length does not match coverage matrix");
    }
    std::vector<int> out(rows_.size(), 0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      int acc = 0;
      for (int j : rows_[i]) acc += x[static_cast<std::size_t>(j)];
      out[i] = acc;
    }
    return out;
  }

 private:
  std::vector<std::vector<int>> rows_;
};

inline CoverageMatrix coverage_matrix(const Heightmap& map, const LightParams& params = {}) {
  validate(params);
  TileIndex tiles(map);
  const int cap = params.l_torch - params.l_min;
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(tiles.n()));
  for (int i = 0; i < tiles.n(); ++i) {
    auto d = detail::floor_block_distances(map, tiles, {i}, cap);
    auto& row = rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < tiles.n(); ++j) {
      if (d[static_cast<std::size_t>(j)] >= 0) row.push_back(j);
    }
  }
  return CoverageMatrix(std::move(rows));
}

struct TorchLayout {
  std::vector<int> selection;  // binary, per tile index
  std::vector<int> light;      // 0..l_torch, per tile index
  int violations = 0;          // tiles with light < l_min
};

/// Simulates the game's light spread: each tile takes the maximum of
/// max{0, l_torch - d} over all torches. One multi-source sweep computes the
/// nearest-torch distance, which is equivalent because the level decays
/// monotonically with distance.
inline TorchLayout light_levels(const Heightmap& map, const std::vector<int>& selection,
                                const LightParams& params = {}) {
  validate(params);
  TileIndex tiles(map);
  if (static_cast<int>(selection.size()) != tiles.n()) {
    throw std::invalid_argument("selection length does not match tile count");
  }
  TorchLayout layout;
  layout.selection = selection;
  layout.light.assign(selection.size(), 0);

  std::vector<int> torches;
  for (int i = 0; i < tiles.n(); ++i) {
    if (selection[static_cast<std::size_t>(i)] != 0) torches.push_back(i);
  }
  if (!torches.empty()) {
    auto d = detail::floor_block_distances(map, tiles, torches, params.l_torch);
    for (int i = 0; i < tiles.n(); ++i) {
      int di = d[static_cast<std::size_t>(i)];
      if (di >= 0) layout.light[static_cast<std::size_t>(i)] = std::max(0, params.l_torch - di);
    }
  }
  layout.violations = static_cast<int>(std::count_if(
      layout.light.begin(), layout.light.end(), [&](int l) { return l < params.l_min; }));
  return layout;
}

}  // namespace torchlight
