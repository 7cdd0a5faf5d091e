#pragma once

#include "exomap/sim/scene.hpp"
#include "exomap/trajectory.hpp"

namespace exomap {

struct LabelerConfig {
  double epsilon = 0.05;        // mass spread over the other classes
  double mislabel_rate = 0.0;   // per-entry chance of a wrong class
  std::uint64_t seed = 0;
};

struct RoomObservation {
  double stamp = 0.0;
  std::vector<double> distribution;  // over labelClasses(scene)
};

/// Class list the simulated labeler scores over: scene room classes in order
/// of first appearance, plus a "corridor" fallback for positions outside all
/// rooms.
std::vector<std::string> labelClasses(const Scene& scene);

/// Simulated room labeler: mass 1 - epsilon on the class of the room hosting
/// each pose (corridor when none), epsilon spread uniformly over the rest;
/// seeded mislabeling swaps the top class.
std::vector<RoomObservation> labelRooms(const Trajectory& trajectory, const Scene& scene,
                                        const LabelerConfig& config = {});

// CSV: stamp,then one column per class (header row carries class names).
void writeRoomObservationsCsv(const std::string& path, const std::vector<std::string>& classes,
                              const std::vector<RoomObservation>& observations);
std::pair<std::vector<std::string>, std::vector<RoomObservation>> readRoomObservationsCsv(
    const std::string& path);

}  // namespace exomap
