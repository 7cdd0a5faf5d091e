#include "exomap/cloud.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

struct PlyProperty {
  std::string type;
  std::string name;
};

std::size_t plyTypeSize(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" || type == "float" ||
      type == "float32") {
    return 4;
  }
  if (type == "double" || type == "float64" || type == "int64" || type == "uint64") return 8;
  throw DataError("unsupported PLY property type: " + type);
}

double readPropertyLE(const char* data, const std::string& type) {
  if (type == "float" || type == "float32") {
    float v;
    std::memcpy(&v, data, 4);
    return static_cast<double>(v);
  }
  if (type == "double" || type == "float64") {
    double v;
    std::memcpy(&v, data, 8);
    return v;
  }
  throw DataError("PLY coordinate property must be float or double, got " + type);
}

}  // namespace

PointCloud readPlyCloud(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open PLY file: " + path);

  std::string line;
  if (!std::getline(is, line) || line.rfind("ply", 0) != 0) {
    throw DataError("not a PLY file: " + path);
  }

  bool ascii = false;
  bool in_vertex_element = false;
  std::size_t vertex_count = 0;
  std::vector<PlyProperty> vertex_props;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    if (token == "comment" || token == "obj_info") continue;
    if (token == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt == "ascii") {
        ascii = true;
      } else if (fmt == "binary_little_endian") {
        ascii = false;
      } else {
        throw DataError("unsupported PLY format: " + fmt);
      }
    } else if (token == "element") {
      std::string name;
      std::size_t count = 0;
      ss >> name >> count;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) vertex_count = count;
    } else if (token == "property") {
      if (!in_vertex_element) continue;
      PlyProperty p;
      ss >> p.type;
      if (p.type == "list") throw DataError("list properties not supported in vertex element");
      ss >> p.name;
      vertex_props.push_back(p);
    } else if (token == "end_header") {
      break;
    }
  }

  int ix = -1, iy = -1, iz = -1;
  for (std::size_t i = 0; i < vertex_props.size(); ++i) {
    if (vertex_props[i].name == "x") ix = static_cast<int>(i);
    if (vertex_props[i].name == "y") iy = static_cast<int>(i);
    if (vertex_props[i].name == "z") iz = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) throw DataError("PLY vertex element lacks x/y/z: " + path);

  PointCloud cloud;
  cloud.points.reserve(vertex_count);

  if (ascii) {
    for (std::size_t i = 0; i < vertex_count; ++i) {
      if (!std::getline(is, line)) throw DataError("truncated ASCII PLY: " + path);
      std::istringstream ss(line);
      std::vector<double> vals(vertex_props.size(), 0.0);
      for (auto& v : vals) ss >> v;
      cloud.points.emplace_back(vals[ix], vals[iy], vals[iz]);
    }
  } else {
    std::size_t stride = 0;
    std::vector<std::size_t> offsets(vertex_props.size());
    for (std::size_t i = 0; i < vertex_props.size(); ++i) {
      offsets[i] = stride;
      stride += plyTypeSize(vertex_props[i].type);
    }
    std::vector<char> row(stride);
    for (std::size_t i = 0; i < vertex_count; ++i) {
      is.read(row.data(), static_cast<std::streamsize>(stride));
      if (!is) throw DataError("truncated binary PLY: " + path);
      cloud.points.emplace_back(readPropertyLE(row.data() + offsets[ix], vertex_props[ix].type),
                                readPropertyLE(row.data() + offsets[iy], vertex_props[iy].type),
                                readPropertyLE(row.data() + offsets[iz], vertex_props[iz].type));
    }
  }
  return cloud;
}

void writePlyCloud(const std::string& path, const PointCloud& cloud, bool ascii) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open PLY file for writing: " + path);

  os << "ply\n";
  os << (ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n");
  os << "element vertex " << cloud.points.size() << "\n";
  os << "property float x\nproperty float y\nproperty float z\n";
  os << "end_header\n";

  if (ascii) {
    char buf[128];
    for (const auto& p : cloud.points) {
      std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x(), p.y(), p.z());
      os << buf;
    }
  } else {
    for (const auto& p : cloud.points) {
      const float xyz[3] = {static_cast<float>(p.x()), static_cast<float>(p.y()),
                            static_cast<float>(p.z())};
      os.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
  }
  if (!os) throw DataError("failed writing PLY file: " + path);
}

}  // namespace exomap
