#include "exomap/sim/render.hpp"

#include <cstring>
#include <fstream>

#include "exomap/errors.hpp"
#include "exomap/pnp.hpp"
#include "exomap/rng.hpp"

namespace exomap {

PointCloud renderDepthCloud(const Scene& scene, const SE3& camera_pose,
                            const CameraIntrinsics& intrinsics, const RenderConfig& config) {
  if (!intrinsics.valid()) throw InvalidArgumentError("invalid camera intrinsics");
  if (config.pixel_stride < 1) throw InvalidArgumentError("pixel stride must be >= 1");

  Rng rng(Rng::deriveSeed(config.seed, 0x8e4d));
  PointCloud cloud;
  cloud.frame = "sensor";
  const Eigen::Matrix3d rotation = camera_pose.rotationMatrix();
  const Eigen::Vector3d origin = camera_pose.translation();

  for (int v = 0; v < intrinsics.height; v += config.pixel_stride) {
    for (int u = 0; u < intrinsics.width; u += config.pixel_stride) {
      const Eigen::Vector3d dir_cam =
          Eigen::Vector3d((u - intrinsics.cx) / intrinsics.fx,
                          (v - intrinsics.cy) / intrinsics.fy, 1.0)
              .normalized();
      const auto hit = scene.raycast(origin, rotation * dir_cam, config.max_range);
      if (!hit) continue;
      double range = hit->distance;
      double sigma = 0.0;
      if (config.noise_sigma > 0.0) {
        sigma = config.noise_sigma * range * range;
        range += rng.gaussian(0.0, sigma);
        if (range <= 0.0) continue;
      }
      cloud.points.push_back(dir_cam * range);
      if (config.noise_sigma > 0.0) cloud.sigmas.push_back(std::max(sigma, 1e-6));
    }
  }
  return cloud;
}

std::vector<Landmark> generateLandmarks(const Scene& scene, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgumentError("landmark count must be >= 1");
  Rng rng(Rng::deriveSeed(seed, 0x1a6d));
  const TriMesh& mesh = scene.mesh();

  // Area-weighted triangle choice via the cumulative distribution.
  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += mesh.triangleArea(t);
    cumulative[t] = total;
  }
  if (total <= 0.0) throw InvalidArgumentError("scene mesh has no surface area");

  std::vector<Landmark> landmarks;
  landmarks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double pick = rng.uniform(0.0, total);
    const std::size_t t = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
    const auto& tri = mesh.triangles[std::min(t, mesh.triangles.size() - 1)];
    double a = rng.uniform(), b = rng.uniform();
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const Eigen::Vector3d& v0 = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Eigen::Vector3d& v1 = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Eigen::Vector3d& v2 = mesh.vertices[static_cast<std::size_t>(tri[2])];
    Landmark lm;
    lm.position = v0 + a * (v1 - v0) + b * (v2 - v0);
    for (auto& byte : lm.descriptor) byte = static_cast<std::uint8_t>(rng.uniformInt(256));
    landmarks.push_back(std::move(lm));
  }
  return landmarks;
}

void writeLandmarkFile(const std::string& path, const std::vector<Landmark>& landmarks) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open landmark file for writing: " + path);
  os.write("EXLM", 4);
  const std::uint32_t count = static_cast<std::uint32_t>(landmarks.size());
  os.write(reinterpret_cast<const char*>(&count), 4);
  for (const auto& lm : landmarks) {
    const double xyz[3] = {lm.position.x(), lm.position.y(), lm.position.z()};
    os.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    os.write(reinterpret_cast<const char*>(lm.descriptor.data()), 32);
  }
  if (!os) throw DataError("failed writing landmark file: " + path);
}

std::vector<Landmark> readLandmarkFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open landmark file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "EXLM", 4) != 0) {
    throw DataError("not a landmark file (bad magic): " + path);
  }
  std::uint32_t count = 0;
  is.read(reinterpret_cast<char*>(&count), 4);
  std::vector<Landmark> landmarks(count);
  for (auto& lm : landmarks) {
    double xyz[3];
    is.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
    is.read(reinterpret_cast<char*>(lm.descriptor.data()), 32);
    if (!is) throw DataError("truncated landmark file: " + path);
    lm.position = Eigen::Vector3d(xyz[0], xyz[1], xyz[2]);
  }
  return landmarks;
}

Keyframe synthKeyframe(const Scene& scene, const SE3& camera_pose,
                       const CameraIntrinsics& intrinsics,
                       const std::vector<Landmark>& landmarks, const KeyframeNoise& noise,
                       int node_id) {
  Rng rng(Rng::deriveSeed(noise.seed, 0xfeed));
  Keyframe kf;
  kf.node_id = node_id;
  kf.intrinsics = intrinsics;
  const Eigen::Vector3d origin = camera_pose.translation();

  for (const auto& lm : landmarks) {
    Eigen::Vector2d px;
    if (!projectPoint(camera_pose, intrinsics, lm.position, px)) continue;
    if (px.x() < 0 || px.x() >= intrinsics.width || px.y() < 0 || px.y() >= intrinsics.height) {
      continue;
    }
    // Occlusion: the first surface along the view ray must be the landmark.
    const Eigen::Vector3d to_lm = lm.position - origin;
    const double dist = to_lm.norm();
    const auto hit = scene.raycast(origin, to_lm / dist, dist + 1.0);
    if (hit && hit->distance < dist - std::max(1e-6, 1e-4 * dist)) continue;

    Eigen::Vector2d jittered = px;
    Descriptor descriptor = lm.descriptor;
    if (noise.pixel_sigma > 0.0) {
      jittered.x() += rng.gaussian(0.0, noise.pixel_sigma);
      jittered.y() += rng.gaussian(0.0, noise.pixel_sigma);
    }
    if (noise.bit_flip_rate > 0.0) {
      for (int bit = 0; bit < 256; ++bit) {
        if (rng.uniform() < noise.bit_flip_rate) {
          descriptor[static_cast<std::size_t>(bit / 8)] ^=
              static_cast<std::uint8_t>(1u << (bit % 8));
        }
      }
    }
    kf.keypoints.push_back(jittered);
    kf.descriptors.push_back(descriptor);
    kf.depths.push_back((camera_pose.inverse() * lm.position).z());
  }
  return kf;
}

}  // namespace exomap
