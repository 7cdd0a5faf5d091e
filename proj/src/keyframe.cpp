#include "exomap/keyframe.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "exomap/errors.hpp"

namespace exomap {

int hammingDistance(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (std::size_t i = 0; i < 32; i += 8) {
    std::uint64_t wa, wb;
    std::memcpy(&wa, a.data() + i, 8);
    std::memcpy(&wb, b.data() + i, 8);
    d += std::popcount(wa ^ wb);
  }
  return d;
}

void writeKeyframeFile(const std::string& path, const Keyframe& kf) {
  if (kf.keypoints.size() != kf.descriptors.size() || kf.keypoints.size() != kf.depths.size()) {
    throw InvalidArgumentError("keyframe keypoint/descriptor/depth lengths differ");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open keyframe file for writing: " + path);

  os.write("EXKF", 4);
  const std::uint32_t node = static_cast<std::uint32_t>(kf.node_id);
  os.write(reinterpret_cast<const char*>(&node), 4);
  const double intr[6] = {kf.intrinsics.fx,
                          kf.intrinsics.fy,
                          kf.intrinsics.cx,
                          kf.intrinsics.cy,
                          static_cast<double>(kf.intrinsics.width),
                          static_cast<double>(kf.intrinsics.height)};
  os.write(reinterpret_cast<const char*>(intr), sizeof(intr));
  const std::uint32_t count = static_cast<std::uint32_t>(kf.keypoints.size());
  os.write(reinterpret_cast<const char*>(&count), 4);
  for (std::size_t i = 0; i < kf.keypoints.size(); ++i) {
    const float uvd[3] = {static_cast<float>(kf.keypoints[i].x()),
                          static_cast<float>(kf.keypoints[i].y()),
                          static_cast<float>(kf.depths[i])};
    os.write(reinterpret_cast<const char*>(uvd), sizeof(uvd));
    os.write(reinterpret_cast<const char*>(kf.descriptors[i].data()), 32);
  }
  if (!os) throw DataError("failed writing keyframe file: " + path);
}

Keyframe readKeyframeFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open keyframe file: " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "EXKF", 4) != 0) {
    throw DataError("not a keyframe file (bad magic): " + path);
  }
  Keyframe kf;
  std::uint32_t node = 0;
  is.read(reinterpret_cast<char*>(&node), 4);
  kf.node_id = static_cast<int>(node);
  double intr[6];
  is.read(reinterpret_cast<char*>(intr), sizeof(intr));
  kf.intrinsics = {intr[0], intr[1], intr[2], intr[3], static_cast<int>(intr[4]),
                   static_cast<int>(intr[5])};
  std::uint32_t count = 0;
  is.read(reinterpret_cast<char*>(&count), 4);
  if (!is) throw DataError("truncated keyframe file header: " + path);
  kf.keypoints.reserve(count);
  kf.descriptors.reserve(count);
  kf.depths.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    float uvd[3];
    is.read(reinterpret_cast<char*>(uvd), sizeof(uvd));
    Descriptor d;
    is.read(reinterpret_cast<char*>(d.data()), 32);
    if (!is) throw DataError("truncated keyframe file payload: " + path);
    kf.keypoints.emplace_back(uvd[0], uvd[1]);
    kf.depths.push_back(uvd[2]);
    kf.descriptors.push_back(d);
  }
  return kf;
}

}  // namespace exomap
