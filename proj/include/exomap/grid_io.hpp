#pragma once

#include <string>

#include "exomap/grid.hpp"

namespace exomap {

// Binary grid-map file:
//   magic "EXGM", version u16, resolution f64, origin 2xf64, rows u32,
//   cols u32, layer count u16, then per layer: name length u16 + UTF-8 name
//   + rows*cols little-endian f32 row-major. Unknown = IEEE quiet NaN.
inline constexpr std::uint16_t kGridFileVersion = 1;

void writeGridFile(const std::string& path, const MultiLayerGrid& grid);
MultiLayerGrid readGridFile(const std::string& path, const std::string& frame = "map");

}  // namespace exomap
