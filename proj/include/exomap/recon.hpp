#pragma once

#include <string>

#include "exomap/cloud.hpp"

namespace exomap {

/// Point-to-point reconstruction error statistics, in centimeters.
struct ReconError {
  double mean_cm = 0.0;
  double max_cm = 0.0;
  double p90_cm = 0.0;
  std::size_t sample_count = 0;
};

/// Nearest-neighbor distance from every sampled point to the ground-truth
/// cloud (exact, kd-tree backed). p90 is the linear-interpolated quantile.
ReconError pointToPointError(const PointCloud& sampled, const PointCloud& ground_truth);

/// CSV row: label,mean_cm,max_cm,p90_cm,samples (with header).
void writeReconCsv(const std::string& path, const std::string& label, const ReconError& error);

}  // namespace exomap
