#include "exomap/graph_io.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "exomap/errors.hpp"
#include "exomap/grid_io.hpp"

namespace exomap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json poseToJson(const SE3& pose) {
  const auto& t = pose.translation();
  const auto& q = pose.rotation();
  return json::array({t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w()});
}

SE3 poseFromJson(const json& arr) {
  if (!arr.is_array() || arr.size() != 7) throw DataError("pose record must have 7 entries");
  return SE3(Eigen::Quaterniond(arr[6], arr[3], arr[4], arr[5]),
             Eigen::Vector3d(arr[0], arr[1], arr[2]));
}

json informationToJson(const Matrix6d& info) {
  json arr = json::array();
  for (int r = 0; r < 6; ++r) {
    for (int c = r; c < 6; ++c) arr.push_back(info(r, c));
  }
  return arr;
}

Matrix6d informationFromJson(const json& arr) {
  if (!arr.is_array() || arr.size() != 21) throw DataError("info record must have 21 entries");
  Matrix6d info;
  std::size_t k = 0;
  for (int r = 0; r < 6; ++r) {
    for (int c = r; c < 6; ++c) {
      info(r, c) = arr[k];
      info(c, r) = arr[k];
      ++k;
    }
  }
  return info;
}

std::string submapSidecarPath(const std::string& grid_path) {
  return grid_path + ".json";
}

}  // namespace

void saveGraph(const std::string& path, const PoseGraph& graph, const std::string& payload_dir) {
  const fs::path graph_path(path);
  const fs::path base = graph_path.has_parent_path() ? graph_path.parent_path() : fs::path(".");
  const fs::path payloads =
      fs::path(payload_dir).is_absolute() ? fs::path(payload_dir) : base / payload_dir;

  bool has_payloads = false;
  for (const auto& n : graph.nodes()) has_payloads |= (n.submap || n.keyframe);
  if (has_payloads) fs::create_directories(payloads);

  std::ofstream os(path);
  if (!os) throw DataError("cannot open graph file for writing: " + path);

  char name[64];
  for (const auto& n : graph.nodes()) {
    json rec;
    rec["id"] = n.id;
    rec["stamp"] = n.stamp;
    rec["pose"] = poseToJson(n.pose);
    if (n.room) {
      rec["room"] = {{"class", n.room->class_name},
                     {"score", n.room->score},
                     {"dist", n.room->distribution}};
    } else {
      rec["room"] = nullptr;
    }
    if (n.submap) {
      std::snprintf(name, sizeof(name), "submap_%05d.exgm", n.id);
      const fs::path grid_path = payloads / name;
      writeGridFile(grid_path.string(), n.submap->grid);
      json sidecar;
      sidecar["capture_node"] = n.submap->capture_node;
      sidecar["capture_pose"] = poseToJson(n.submap->capture_pose);
      std::ofstream side(submapSidecarPath(grid_path.string()));
      side << sidecar.dump() << "\n";
      rec["submap_path"] = fs::relative(grid_path, base).string();
    } else {
      rec["submap_path"] = nullptr;
    }
    if (n.keyframe) {
      std::snprintf(name, sizeof(name), "keyframe_%05d.exkf", n.id);
      const fs::path kf_path = payloads / name;
      writeKeyframeFile(kf_path.string(), *n.keyframe);
      rec["keyframe_path"] = fs::relative(kf_path, base).string();
    } else {
      rec["keyframe_path"] = nullptr;
    }
    os << rec.dump() << "\n";
  }

  for (const auto& f : graph.factors()) {
    json rec;
    rec["kind"] = f.kind == Factor::Kind::kOdometry ? "odometry" : "loop_closure";
    rec["from"] = f.from_id;
    rec["to"] = f.to_id;
    rec["rel_pose"] = poseToJson(f.relative_pose);
    rec["info"] = informationToJson(f.information);
    os << rec.dump() << "\n";
  }
  if (!os) throw DataError("failed writing graph file: " + path);
}

PoseGraph loadGraph(const std::string& path, bool load_payloads) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open graph file: " + path);
  const fs::path base = fs::path(path).has_parent_path() ? fs::path(path).parent_path() : ".";

  std::vector<GraphNode> nodes;
  std::vector<Factor> factors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("bad JSON on line " + std::to_string(line_no) + " of " + path + ": " +
                      e.what());
    }

    if (rec.contains("kind")) {
      Factor f;
      const std::string kind = rec.at("kind");
      if (kind == "odometry") {
        f.kind = Factor::Kind::kOdometry;
      } else if (kind == "loop_closure") {
        f.kind = Factor::Kind::kLoopClosure;
      } else {
        throw DataError("unknown factor kind: " + kind);
      }
      f.from_id = rec.at("from");
      f.to_id = rec.at("to");
      f.relative_pose = poseFromJson(rec.at("rel_pose"));
      f.information = informationFromJson(rec.at("info"));
      factors.push_back(std::move(f));
    } else {
      GraphNode n;
      n.id = rec.at("id");
      n.stamp = rec.at("stamp");
      n.pose = poseFromJson(rec.at("pose"));
      if (rec.contains("room") && !rec.at("room").is_null()) {
        RoomLabel label;
        label.class_name = rec.at("room").at("class");
        label.score = rec.at("room").at("score");
        label.distribution = rec.at("room").at("dist").get<std::vector<double>>();
        n.room = std::move(label);
      }
      if (load_payloads && rec.contains("submap_path") && !rec.at("submap_path").is_null()) {
        const fs::path grid_path = base / rec.at("submap_path").get<std::string>();
        auto submap = std::make_shared<Submap>();
        submap->grid = readGridFile(grid_path.string(), "odom");
        std::ifstream side(submapSidecarPath(grid_path.string()));
        if (!side) throw DataError("missing submap sidecar for " + grid_path.string());
        json sidecar;
        side >> sidecar;
        submap->capture_node = sidecar.at("capture_node");
        submap->capture_pose = poseFromJson(sidecar.at("capture_pose"));
        n.submap = std::move(submap);
      }
      if (load_payloads && rec.contains("keyframe_path") && !rec.at("keyframe_path").is_null()) {
        const fs::path kf_path = base / rec.at("keyframe_path").get<std::string>();
        n.keyframe = std::make_shared<Keyframe>(readKeyframeFile(kf_path.string()));
      }
      nodes.push_back(std::move(n));
    }
  }

  std::sort(nodes.begin(), nodes.end(),
            [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  PoseGraph graph;
  for (auto& n : nodes) graph.appendNode(std::move(n));
  for (const auto& f : factors) graph.appendFactor(f);
  return graph;
}

}  // namespace exomap
