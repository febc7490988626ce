#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "torchlight/rng.hpp"

namespace torchlight {

struct GridPos {
  int row = 0;
  int col = 0;
  bool operator==(const GridPos&) const = default;
};

struct ParseError : std::runtime_error {
  ParseError(int line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  int line;
};

/// Top-down grid of floor elevations. A wall column has infinite elevation
/// and is stored as the kWall sentinel.
class Heightmap {
 public:
  static constexpr int kWall = -1;

  Heightmap(int width, int height, std::vector<int> elevation)
      : width_(width), height_(height), elevation_(std::move(elevation)) {
    if (width_ < 1 || height_ < 1) {
      throw std::invalid_argument("heightmap dimensions must be positive");
    }
    if (elevation_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
      throw std::invalid_argument("elevation grid does not match width*height");
    }
    bool any_floor = false;
    for (int v : elevation_) {
      if (v == kWall) continue;
      if (v < 0) throw std::invalid_argument("elevations must be non-negative");
      any_floor = true;
    }
    if (!any_floor) throw std::invalid_argument("heightmap has no non-wall tile");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  // kWall for walls, the floor elevation otherwise.
  int cell(int row, int col) const {
    return elevation_[static_cast<std::size_t>(row) * width_ + col];
  }

  bool wall(int row, int col) const { return cell(row, col) == kWall; }

  int floor_count() const {
    return static_cast<int>(std::count_if(elevation_.begin(), elevation_.end(),
                                          [](int v) { return v != kWall; }));
  }

  int max_elevation() const {
    int m = 0;
    for (int v : elevation_) m = std::max(m, v);  // kWall = -1 never wins
    return m;
  }

  bool operator==(const Heightmap&) const = default;

 private:
  int width_;
  int height_;
  std::vector<int> elevation_;
};

/// Fixed row-major enumeration of the non-wall tiles; variable i of every
/// vector in this library refers to site(i).
class TileIndex {
 public:
  explicit TileIndex(const Heightmap& map)
      : width_(map.width()), lookup_(static_cast<std::size_t>(map.width()) * map.height(), -1) {
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        if (!map.wall(r, c)) {
          lookup_[static_cast<std::size_t>(r) * width_ + c] = static_cast<int>(sites_.size());
          sites_.push_back({r, c});
        }
      }
    }
  }

  int n() const { return static_cast<int>(sites_.size()); }

  GridPos site(int i) const { return sites_[static_cast<std::size_t>(i)]; }

  // -1 for walls; callers must bounds-check positions themselves.
  int index_of(int row, int col) const {
    return lookup_[static_cast<std::size_t>(row) * width_ + col];
  }

 private:
  int width_;
  std::vector<GridPos> sites_;
  std::vector<int> lookup_;
};

inline TileIndex tile_index(const Heightmap& map) { return TileIndex(map); }

/// Text format: one line per row, whitespace-separated tokens; a non-negative
/// integer is a floor elevation, "#" is a wall. Blank lines are skipped.
inline Heightmap parse_heightmap(std::istream& in) {
  std::vector<int> cells;
  int width = -1;
  int rows = 0;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream tokens(line);
    std::string tok;
    int count = 0;
    while (tokens >> tok) {
      if (tok == "#") {
        cells.push_back(Heightmap::kWall);
      } else {
        std::size_t used = 0;
        int value = 0;
        try {
          value = std::stoi(tok, &used);
        } catch (const std::exception&) {
          throw ParseError(line_number, "bad token '" + tok + "'");
        }
        if (used != tok.size() || value < 0) {
          throw ParseError(line_number, "bad token '" + tok + "'");
        }
        cells.push_back(value);
      }
      ++count;
    }
    if (count == 0) continue;  // blank line
    if (width == -1) {
      width = count;
    } else if (count != width) {
      throw ParseError(line_number, "expected " + std::to_string(width) + " tokens, got " +
                                        std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(line_number, "empty input");
  bool any_floor = std::any_of(cells.begin(), cells.end(),
                               [](int v) { return v != Heightmap::kWall; });
  if (!any_floor) throw ParseError(line_number, "map has no non-wall tile");
  return Heightmap(width, rows, std::move(cells));
}

inline Heightmap parse_heightmap(const std::string& text) {
  std::istringstream in(text);
  return parse_heightmap(in);
}

inline std::string serialize_heightmap(const Heightmap& map) {
  std::ostringstream out;
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      if (c > 0) out << ' ';
      if (map.wall(r, c)) {
        out << '#';
      } else {
        out << map.cell(r, c);
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace detail {

// Classic lattice-gradient noise: seeded permutation table, 8 unit-ish
// gradients, quintic fade. Values land in roughly [-1, 1] and are exactly 0
// at lattice points, so callers should sample off-lattice.
class PerlinNoise {
 public:
  explicit PerlinNoise(std::uint64_t seed) {
    std::array<int, 256> p;
    std::iota(p.begin(), p.end(), 0);
    Rng rng(seed);
    for (int i = 255; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(rng.below(i + 1))]);
    for (int i = 0; i < 512; ++i) perm_[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i & 255)];
  }

  double sample(double x, double y) const {
    int xi = static_cast<int>(std::floor(x));
    int yi = static_cast<int>(std::floor(y));
    double xf = x - xi;
    double yf = y - yi;
    double u = fade(xf);
    double v = fade(yf);
    int aa = hash(xi, yi);
    int ab = hash(xi, yi + 1);
    int ba = hash(xi + 1, yi);
    int bb = hash(xi + 1, yi + 1);
    double x1 = lerp(grad(aa, xf, yf), grad(ba, xf - 1, yf), u);
    double x2 = lerp(grad(ab, xf, yf - 1), grad(bb, xf - 1, yf - 1), u);
    return lerp(x1, x2, v);
  }

 private:
  static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }
  static double lerp(double a, double b, double t) { return a + t * (b - a); }

  int hash(int x, int y) const {
    return perm_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(x & 255)] + (y & 255))];
  }

  static double grad(int h, double x, double y) {
    switch (h & 7) {
      case 0: return x + y;
      case 1: return x - y;
      case 2: return -x + y;
      case 3: return -x - y;
      case 4: return x;
      case 5: return -x;
      case 6: return y;
      default: return -y;
    }
  }

  std::array<int, 512> perm_;
};

}  // namespace detail

/// Procedural instance generator. Noise above the wall_threshold quantile
/// becomes wall; the rest is quantized into equal-width elevation bands.
/// Pure function of its arguments.
inline Heightmap generate_perlin_map(int width, int height, std::uint64_t seed,
                                     double wall_threshold = 0.6, int elevation_levels = 4,
                                     int octaves = 1) {
  if (width < 2 || height < 2) throw std::invalid_argument("map dimensions must be at least 2x2");
  if (!(wall_threshold > 0.0 && wall_threshold <= 1.0)) {
    throw std::invalid_argument("wall_threshold must be in (0, 1]");
  }
  if (elevation_levels < 1) throw std::invalid_argument("elevation_levels must be >= 1");
  if (octaves < 1) throw std::invalid_argument("octaves must be >= 1");

  constexpr double kBaseFrequency = 1.0 / 7.0;  // one lattice cell per ~7 tiles
  std::uint64_t attempt_seed = seed;
  for (int attempt = 0; attempt < 16; ++attempt) {
    detail::PerlinNoise noise(attempt_seed);
    std::vector<double> values(static_cast<std::size_t>(width) * height);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        double v = 0.0;
        double amp = 1.0;
        double freq = kBaseFrequency;
        double norm = 0.0;
        for (int o = 0; o < octaves; ++o) {
          v += amp * noise.sample((c + 0.37) * freq, (r + 0.19) * freq);
          norm += amp;
          amp *= 0.5;
          freq *= 2.0;
        }
        values[static_cast<std::size_t>(r) * width + c] = v / norm;
      }
    }

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t last = sorted.size() - 1;
    auto qidx = static_cast<std::size_t>(std::floor(wall_threshold * static_cast<double>(last)));
    const double threshold = sorted[std::min(qidx, last)];

    double lo = threshold;
    for (double v : values) {
      if (v <= threshold) lo = std::min(lo, v);
    }
    const double span = threshold - lo;

    std::vector<int> cells(values.size());
    int floors = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] > threshold) {
        cells[i] = Heightmap::kWall;
        continue;
      }
      int level = 0;
      if (span > 0.0) {
        level = static_cast<int>((values[i] - lo) / span * elevation_levels);
        level = std::clamp(level, 0, elevation_levels - 1);
      }
      cells[i] = level;
      ++floors;
    }
    if (floors > 0) return Heightmap(width, height, std::move(cells));
    attempt_seed = splitmix64(attempt_seed);  // unreachable with quantile thresholding
  }
  throw std::logic_error("perlin generation produced no floor tiles");
}

}  // namespace torchlight
