#pragma once

#include "exomap/cloud.hpp"
#include "exomap/keyframe.hpp"
#include "exomap/se3.hpp"
#include "exomap/sim/scene.hpp"

namespace exomap {

struct RenderConfig {
  double noise_sigma = 0.0;  // depth std = noise_sigma * range^2
  double max_range = 5.0;    // meters
  int pixel_stride = 4;      // cast every Nth pixel in u and v
  std::uint64_t seed = 0;
};

/// Raycast depth cloud in the sensor frame (camera optical convention:
/// z forward, x right, y down). Misses and beyond-range hits drop out; an
/// empty cloud is a valid result. Per-point sigmas carry the noise model when
/// noise_sigma > 0. Deterministic per seed.
PointCloud renderDepthCloud(const Scene& scene, const SE3& camera_pose,
                            const CameraIntrinsics& intrinsics, const RenderConfig& config = {});

struct Landmark {
  Eigen::Vector3d position;
  Descriptor descriptor;
};

/// Area-uniform surface landmarks with fixed random descriptors.
std::vector<Landmark> generateLandmarks(const Scene& scene, int count, std::uint64_t seed);

// Landmark file: magic "EXLM", count u32, per landmark 3xf64 + 32 bytes.
void writeLandmarkFile(const std::string& path, const std::vector<Landmark>& landmarks);
std::vector<Landmark> readLandmarkFile(const std::string& path);

struct KeyframeNoise {
  double pixel_sigma = 0.3;    // keypoint jitter, pixels
  double bit_flip_rate = 0.02; // descriptor corruption per bit
  std::uint64_t seed = 0;
};

/// Projects visible, unoccluded landmarks into the camera: keypoints with
/// pixel noise, descriptors with seeded bit flips, true z-depth per keypoint.
Keyframe synthKeyframe(const Scene& scene, const SE3& camera_pose,
                       const CameraIntrinsics& intrinsics,
                       const std::vector<Landmark>& landmarks, const KeyframeNoise& noise = {},
                       int node_id = -1);

}  // namespace exomap
