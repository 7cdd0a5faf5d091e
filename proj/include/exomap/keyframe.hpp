#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace exomap {

struct CameraIntrinsics {
  double fx = 300.0;
  double fy = 300.0;
  double cx = 160.0;
  double cy = 120.0;
  int width = 320;
  int height = 240;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && cx > 0.0 && cx < width && cy > 0.0 && cy < height;
  }
};

using Descriptor = std::array<std::uint8_t, 32>;  // 256-bit binary code

/// Node payload enabling retrieval and PnP: keypoints with binary descriptors
/// and per-keypoint depth (NaN where unknown).
struct Keyframe {
  int node_id = -1;
  CameraIntrinsics intrinsics;
  std::vector<Eigen::Vector2d> keypoints;  // pixel positions
  std::vector<Descriptor> descriptors;
  std::vector<double> depths;  // z-depth in meters, NaN = unknown

  std::size_t size() const { return keypoints.size(); }
};

int hammingDistance(const Descriptor& a, const Descriptor& b);

// Keyframe file: magic "EXKF", node id u32, intrinsics 6xf64
// (fx fy cx cy width height), keypoint count u32, then per keypoint:
// u/v f32, depth f32 (NaN = unknown), 32 descriptor bytes.
void writeKeyframeFile(const std::string& path, const Keyframe& kf);
Keyframe readKeyframeFile(const std::string& path);

}  // namespace exomap
