#include "exomap/classification.hpp"

#include <cstdio>
#include <fstream>

#include "exomap/errors.hpp"

namespace exomap {

ClassificationReport evaluateClassification(const TraversabilityMap& pred,
                                            const TraversabilityMap& labels,
                                            const std::vector<double>& thresholds) {
  if (!(pred.geometry == labels.geometry)) {
    throw InvalidArgumentError("prediction and label grids are not aligned");
  }
  if (thresholds.empty()) throw InvalidArgumentError("no thresholds given");

  // Collect jointly known cells once.
  std::vector<std::pair<double, bool>> samples;  // score, positive label
  bool any_positive = false, any_negative = false;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double score = pred.values[i];
    const double label = labels.values[i];
    if (!isKnown(score) || !isKnown(label)) continue;
    const bool positive = label >= 0.5;
    any_positive |= positive;
    any_negative |= !positive;
    samples.emplace_back(score, positive);
  }
  if (!any_positive || !any_negative) {
    throw InvalidArgumentError("labels must contain at least one positive and one negative");
  }

  ClassificationReport report;
  report.thresholds = thresholds;
  report.precision.resize(thresholds.size());
  report.recall.resize(thresholds.size());
  report.f_score.resize(thresholds.size());

  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double tau = thresholds[k];
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& [score, positive] : samples) {
      const bool predicted = score >= tau;
      if (predicted && positive) ++tp;
      if (predicted && !positive) ++fp;
      if (!predicted && positive) ++fn;
    }
    const double p = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double r = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    report.precision[k] = p;
    report.recall[k] = r;
    report.f_score[k] = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    if (k == 0 || report.f_score[k] > report.best_f) {
      report.best_f = report.f_score[k];
      report.best_threshold = tau;
    }
  }
  return report;
}

void writeClassificationCsv(const std::string& path, const ClassificationReport& report) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open classification CSV for writing: " + path);
  os << "threshold,precision,recall,f\n";
  char buf[160];
  for (std::size_t i = 0; i < report.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.9g,%.9g,%.9g\n", report.thresholds[i],
                  report.precision[i], report.recall[i], report.f_score[i]);
    os << buf;
  }
  if (!os) throw DataError("failed writing classification CSV: " + path);
}

}  // namespace exomap
