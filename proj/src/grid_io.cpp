#include "exomap/grid_io.hpp"

#include <cstring>
#include <fstream>

namespace exomap {

namespace {

template <typename T>
void writeLE(std::ostream& os, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
#endif
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T readLE(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
#endif
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void writeGridFile(const std::string& path, const MultiLayerGrid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open grid file for writing: " + path);

  os.write("EXGM", 4);
  writeLE<std::uint16_t>(os, kGridFileVersion);
  const GridGeometry& g = grid.geometry();
  writeLE<double>(os, g.resolution());
  writeLE<double>(os, g.origin().x());
  writeLE<double>(os, g.origin().y());
  writeLE<std::uint32_t>(os, static_cast<std::uint32_t>(g.rows()));
  writeLE<std::uint32_t>(os, static_cast<std::uint32_t>(g.cols()));

  const auto names = grid.layerNames();
  writeLE<std::uint16_t>(os, static_cast<std::uint16_t>(names.size()));
  for (const auto& name : names) {
    writeLE<std::uint16_t>(os, static_cast<std::uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    const Layer& l = grid.layer(name);
    for (double v : l.values) writeLE<float>(os, static_cast<float>(v));
  }
  if (!os) throw DataError("failed writing grid file: " + path);
}

MultiLayerGrid readGridFile(const std::string& path, const std::string& frame) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open grid file: " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "EXGM", 4) != 0) {
    throw DataError("not a grid-map file (bad magic): " + path);
  }
  const auto version = readLE<std::uint16_t>(is);
  if (version != kGridFileVersion) {
    throw DataError("unsupported grid file version in " + path);
  }
  const double resolution = readLE<double>(is);
  const double ox = readLE<double>(is);
  const double oy = readLE<double>(is);
  const auto rows = readLE<std::uint32_t>(is);
  const auto cols = readLE<std::uint32_t>(is);
  const auto layer_count = readLE<std::uint16_t>(is);
  if (!is) throw DataError("truncated grid file header: " + path);

  GridGeometry geom(resolution, Eigen::Vector2d(ox, oy), static_cast<int>(rows),
                    static_cast<int>(cols));
  MultiLayerGrid grid(geom, frame);
  for (std::uint16_t li = 0; li < layer_count; ++li) {
    const auto name_len = readLE<std::uint16_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    Layer& layer = grid.addLayer(name);
    for (auto& v : layer.values) v = static_cast<double>(readLE<float>(is));
    if (!is) throw DataError("truncated grid file payload: " + path);
  }
  return grid;
}

}  // namespace exomap
