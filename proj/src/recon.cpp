#include "exomap/recon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "exomap/errors.hpp"
#include "exomap/kdtree.hpp"

namespace exomap {

ReconError pointToPointError(const PointCloud& sampled, const PointCloud& ground_truth) {
  if (sampled.empty() || ground_truth.empty()) {
    throw InvalidArgumentError("pointToPointError needs non-empty clouds");
  }

  const KdTree3 tree(ground_truth.points);
  std::vector<double> distances;
  distances.reserve(sampled.size());
  double sum = 0.0;
  for (const auto& p : sampled.points) {
    const double d = std::sqrt(tree.nearest(p).first);
    distances.push_back(d);
    sum += d;
  }
  std::sort(distances.begin(), distances.end());

  // Linear-interpolated quantile at 0.9.
  const double pos = 0.9 * static_cast<double>(distances.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, distances.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  const double p90 = distances[lo] + frac * (distances[hi] - distances[lo]);

  ReconError error;
  error.mean_cm = 100.0 * sum / static_cast<double>(distances.size());
  error.max_cm = 100.0 * distances.back();
  error.p90_cm = 100.0 * p90;
  error.sample_count = distances.size();
  return error;
}

void writeReconCsv(const std::string& path, const std::string& label, const ReconError& error) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open recon CSV for writing: " + path);
  os << "label,mean_cm,max_cm,p90_cm,samples\n";
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%zu\n", label.c_str(), error.mean_cm,
                error.max_cm, error.p90_cm, error.sample_count);
  os << buf;
  if (!os) throw DataError("failed writing recon CSV: " + path);
}

}  // namespace exomap
