#include "exomap/trajectory.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exomap/errors.hpp"

namespace exomap {

void Trajectory::append(double stamp, const SE3& pose) {
  if (!entries.empty() && stamp <= entries.back().stamp) {
    throw InvalidArgumentError("trajectory stamps must be strictly increasing");
  }
  entries.push_back({stamp, pose});
}

std::size_t Trajectory::nearestIndex(double t) const {
  if (entries.empty()) throw InvalidArgumentError("empty trajectory");
  const auto cmp = [](const StampedPose& e, double value) { return e.stamp < value; };
  const auto it = std::lower_bound(entries.begin(), entries.end(), t, cmp);
  if (it == entries.begin()) return 0;
  if (it == entries.end()) return entries.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - entries.begin());
  const std::size_t lo = hi - 1;
  return (t - entries[lo].stamp) <= (entries[hi].stamp - t) ? lo : hi;
}

Trajectory readTumTrajectory(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open trajectory file: " + path);

  Trajectory traj;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double stamp, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> stamp >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) {
      throw DataError("malformed trajectory line " + std::to_string(line_no) + " in " + path);
    }
    traj.append(stamp, SE3(Eigen::Quaterniond(qw, qx, qy, qz), Eigen::Vector3d(tx, ty, tz)));
  }
  return traj;
}

void writeTumTrajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open trajectory file for writing: " + path);
  char buf[256];
  for (const auto& e : traj.entries) {
    const auto& t = e.pose.translation();
    const auto& q = e.pose.rotation();
    std::snprintf(buf, sizeof(buf), "%.9f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n", e.stamp, t.x(),
                  t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
    os << buf;
  }
  if (!os) throw DataError("failed writing trajectory file: " + path);
}

}  // namespace exomap
