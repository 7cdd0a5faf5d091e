#pragma once

#include <string>
#include <vector>

#include "exomap/traversability.hpp"

namespace exomap {

/// Precision/recall/F sweep of a score map against binary ground truth.
struct ClassificationReport {
  std::vector<double> thresholds;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f_score;
  double best_threshold = 0.0;
  double best_f = 0.0;

  std::size_t size() const { return thresholds.size(); }
};

/// Binarizes pred at each threshold (positive iff score >= tau) and scores it
/// against labels (1 = traversable/positive, 0 = negative, NaN = ignored).
/// Cells unknown in either grid are skipped. Throws on misaligned geometries
/// and when the labels lack a positive or a negative cell.
ClassificationReport evaluateClassification(const TraversabilityMap& pred,
                                            const TraversabilityMap& labels,
                                            const std::vector<double>& thresholds);

/// CSV rows: threshold,precision,recall,f
void writeClassificationCsv(const std::string& path, const ClassificationReport& report);

}  // namespace exomap
