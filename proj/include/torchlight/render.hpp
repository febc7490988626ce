#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "torchlight/geometry.hpp"

namespace torchlight {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    auto base = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[base], rgb[base + 1], rgb[base + 2]};
  }
};

// Marker colors are reserved: shading never reaches pure white/red/blue, so
// counting exact-color pixels recovers walls, torches and violations.
inline constexpr std::array<std::uint8_t, 3> kWallColor = {255, 255, 255};
inline constexpr std::array<std::uint8_t, 3> kTorchColor = {255, 0, 0};
inline constexpr std::array<std::uint8_t, 3> kViolationColor = {0, 0, 255};

/// Without a layout: elevation grayscale (lighter = higher). With one:
/// light-level shading plus torch and violation markers. Each tile becomes
/// a scale x scale pixel block.
inline Image render_map(const Heightmap& map, const TorchLayout* layout = nullptr,
                        int scale = 1, const LightParams& params = {}) {
  if (scale < 1 || scale > 64) throw std::invalid_argument("render scale must be in [1, 64]");
  if (layout != nullptr &&
      static_cast<int>(layout->light.size()) != tile_index(map).n()) {
    throw std::invalid_argument("layout does not match the map");
  }

  Image img;
  img.width = map.width() * scale;
  img.height = map.height() * scale;
  img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);

  TileIndex tiles(map);
  const int max_z = map.max_elevation();
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      std::array<std::uint8_t, 3> color{};
      if (map.wall(r, c)) {
        color = kWallColor;
      } else if (layout == nullptr) {
        int g = 40 + (max_z > 0 ? 180 * map.cell(r, c) / max_z : 0);
        color = {static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(g),
                 static_cast<std::uint8_t>(g)};
      } else {
        int i = tiles.index_of(r, c);
        int light = layout->light[static_cast<std::size_t>(i)];
        if (layout->selection[static_cast<std::size_t>(i)] != 0) {
          color = kTorchColor;
        } else if (light < params.l_min) {
          color = kViolationColor;
        } else {
          int g = 16 + 14 * std::min(light, 14);
          color = {static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(g),
                   static_cast<std::uint8_t>(g)};
        }
      }
      for (int dy = 0; dy < scale; ++dy) {
        for (int dx = 0; dx < scale; ++dx) {
          auto base = ((static_cast<std::size_t>(r) * scale + dy) * img.width +
                       static_cast<std::size_t>(c) * scale + dx) *
                      3;
          img.rgb[base] = color[0];
          img.rgb[base + 1] = color[1];
          img.rgb[base + 2] = color[2];
        }
      }
    }
  }
  return img;
}

inline void write_ppm(std::ostream& out, const Image& img) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
}

inline void write_ppm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_ppm(out, img);
}

inline int count_pixels(const Image& img, const std::array<std::uint8_t, 3>& color) {
  int count = 0;
  for (std::size_t i = 0; i + 2 < img.rgb.size(); i += 3) {
    if (img.rgb[i] == color[0] && img.rgb[i + 1] == color[1] && img.rgb[i + 2] == color[2]) {
      ++count;
    }
  }
  return count;
}

}  // namespace torchlight
