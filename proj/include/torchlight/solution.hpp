#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torchlight/heightmap.hpp"

namespace torchlight {

/// Solver output as written to disk. Schema:
/// {"map": path, "torches": [[row,col],...], "violations": int,
///  "iterations": int, "solver": string, "seed": int}
struct TorchSolution {
  std::string map_path;
  std::vector<GridPos> torches;
  int violations = 0;
  int iterations = 0;
  std::string solver;
  std::uint64_t seed = 0;
};

inline nlohmann::json to_json(const TorchSolution& s) {
  nlohmann::json torches = nlohmann::json::array();
  for (const auto& t : s.torches) torches.push_back({t.row, t.col});
  return nlohmann::json{{"map", s.map_path},       {"torches", torches},
                        {"violations", s.violations}, {"iterations", s.iterations},
                        {"solver", s.solver},      {"seed", s.seed}};
}

inline TorchSolution solution_from_json(const nlohmann::json& j) {
  TorchSolution s;
  s.map_path = j.at("map").get<std::string>();
  for (const auto& t : j.at("torches")) {
    if (!t.is_array() || t.size() != 2) {
      throw std::runtime_error("solution torches must be [row, col] pairs");
    }
    s.torches.push_back({t[0].get<int>(), t[1].get<int>()});
  }
  s.violations = j.at("violations").get<int>();
  s.iterations = j.at("iterations").get<int>();
  s.solver = j.at("solver").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

inline void write_solution(const std::string& path, const TorchSolution& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(s).dump(2) << '\n';
}

inline TorchSolution read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return solution_from_json(j);
}

/// Torch coordinates -> binary selection over the tile index. Rejects
/// positions that are out of bounds or on walls.
inline std::vector<int> selection_from_torches(const Heightmap& map, const TileIndex& tiles,
                                               const std::vector<GridPos>& torches) {
  std::vector<int> x(static_cast<std::size_t>(tiles.n()), 0);
  for (const auto& t : torches) {
    if (!map.in_bounds(t.row, t.col) || map.wall(t.row, t.col)) {
      throw std::runtime_error("torch at (" + std::to_string(t.row) + ", " +
                               std::to_string(t.col) + ") is not on a floor tile");
    }
    x[static_cast<std::size_t>(tiles.index_of(t.row, t.col))] = 1;
  }
  return x;
}

inline std::vector<GridPos> torches_from_selection(const TileIndex& tiles,
                                                   const std::vector<int>& x) {
  std::vector<GridPos> torches;
  for (int i = 0; i < tiles.n(); ++i) {
    if (x[static_cast<std::size_t>(i)] != 0) torches.push_back(tiles.site(i));
  }
  return torches;
}

}  // namespace torchlight
