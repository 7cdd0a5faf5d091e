#include "exomap/sim/labels.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "exomap/errors.hpp"
#include "exomap/rng.hpp"

namespace exomap {

std::vector<std::string> labelClasses(const Scene& scene) {
  std::vector<std::string> classes;
  for (const auto& room : scene.spec().rooms) {
    if (std::find(classes.begin(), classes.end(), room.class_name) == classes.end()) {
      classes.push_back(room.class_name);
    }
  }
  if (std::find(classes.begin(), classes.end(), "corridor") == classes.end()) {
    classes.push_back("corridor");
  }
  return classes;
}

std::vector<RoomObservation> labelRooms(const Trajectory& trajectory, const Scene& scene,
                                        const LabelerConfig& config) {
  const auto classes = labelClasses(scene);
  const std::size_t n_classes = classes.size();
  Rng rng(Rng::deriveSeed(config.seed, 0x1abe1));

  std::vector<RoomObservation> observations;
  observations.reserve(trajectory.size());
  for (const auto& entry : trajectory.entries) {
    const Eigen::Vector2d p = entry.pose.translation().head<2>();
    const int room = scene.roomIndexAt(p, entry.pose.translation().z());
    std::string cls =
        room >= 0 ? scene.spec().rooms[static_cast<std::size_t>(room)].class_name : "corridor";

    if (config.mislabel_rate > 0.0 && rng.uniform() < config.mislabel_rate && n_classes > 1) {
      // Swap to a seeded different class.
      std::size_t wrong = rng.uniformInt(n_classes - 1);
      const std::size_t current = static_cast<std::size_t>(
          std::find(classes.begin(), classes.end(), cls) - classes.begin());
      if (wrong >= current) ++wrong;
      cls = classes[wrong];
    }

    RoomObservation obs;
    obs.stamp = entry.stamp;
    obs.distribution.assign(n_classes, n_classes > 1 ? config.epsilon / (n_classes - 1) : 0.0);
    const std::size_t idx = static_cast<std::size_t>(
        std::find(classes.begin(), classes.end(), cls) - classes.begin());
    obs.distribution[idx] = n_classes > 1 ? 1.0 - config.epsilon : 1.0;
    observations.push_back(std::move(obs));
  }
  return observations;
}

void writeRoomObservationsCsv(const std::string& path, const std::vector<std::string>& classes,
                              const std::vector<RoomObservation>& observations) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open label CSV for writing: " + path);
  os << "stamp";
  for (const auto& c : classes) os << "," << c;
  os << "\n";
  char buf[64];
  for (const auto& obs : observations) {
    std::snprintf(buf, sizeof(buf), "%.6f", obs.stamp);
    os << buf;
    for (double v : obs.distribution) {
      std::snprintf(buf, sizeof(buf), ",%.9g", v);
      os << buf;
    }
    os << "\n";
  }
  if (!os) throw DataError("failed writing label CSV: " + path);
}

std::pair<std::vector<std::string>, std::vector<RoomObservation>> readRoomObservationsCsv(
    const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open label CSV: " + path);
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty label CSV: " + path);

  std::vector<std::string> classes;
  {
    std::istringstream header(line);
    std::string token;
    bool first = true;
    while (std::getline(header, token, ',')) {
      if (first) {
        first = false;
        continue;  // "stamp"
      }
      classes.push_back(token);
    }
  }

  std::vector<RoomObservation> observations;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    RoomObservation obs;
    if (!std::getline(row, token, ',')) break;
    obs.stamp = std::stod(token);
    while (std::getline(row, token, ',')) obs.distribution.push_back(std::stod(token));
    if (obs.distribution.size() != classes.size()) {
      throw DataError("label CSV row width mismatch in " + path);
    }
    observations.push_back(std::move(obs));
  }
  return {classes, observations};
}

}  // namespace exomap
