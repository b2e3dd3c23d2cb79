#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smr {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  ConfusionCounts counts;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Exhaustive cell count over paired prediction/label vectors.
inline ConfusionCounts confusion_from(const std::vector<bool>& predictions,
                                      const std::vector<bool>& labels) {
  if (predictions.size() != labels.size())
    throw std::runtime_error("confusion_from: prediction/label length mismatch");
  if (predictions.empty())
    throw std::runtime_error("confusion_from: empty inputs");
  ConfusionCounts counts;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] && labels[i]) ++counts.tp;
    else if (predictions[i] && !labels[i]) ++counts.fp;
    else if (!predictions[i] && labels[i]) ++counts.fn;
    else ++counts.tn;
  }
  return counts;
}

// Accuracy, precision, recall, F1 with the 0/0 -> 0 convention on every
// degenerate denominator (all-negative predictors score P=R=F1=0).
inline MetricsReport metrics_from(const ConfusionCounts& counts) {
  const std::uint64_t total = counts.total();
  if (total == 0) throw std::runtime_error("metrics_from: zero total count");
  MetricsReport report;
  report.counts = counts;
  report.accuracy =
      static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total);
  const std::uint64_t predicted_pos = counts.tp + counts.fp;
  const std::uint64_t actual_pos = counts.tp + counts.fn;
  report.precision = predicted_pos == 0
                         ? 0.0
                         : static_cast<double>(counts.tp) /
                               static_cast<double>(predicted_pos);
  report.recall = actual_pos == 0 ? 0.0
                                  : static_cast<double>(counts.tp) /
                                        static_cast<double>(actual_pos);
  const double pr = report.precision + report.recall;
  report.f1 = pr == 0.0 ? 0.0 : 2.0 * report.precision * report.recall / pr;
  return report;
}

// Half-up rounding at 3 decimals, as printed in every emitted table. The
// 1e-9 guard keeps decimal boundary values (0.7485 is stored slightly below
// the true boundary) rounding upward.
inline double round3(double x) {
  return std::floor(x * 1000.0 + 0.5 + 1e-9) / 1000.0;
}

inline std::string format3(double x) {
  const auto scaled = static_cast<long long>(std::floor(x * 1000.0 + 0.5 + 1e-9));
  std::string digits = std::to_string(scaled);
  while (digits.size() < 4) digits.insert(digits.begin(), '0');
  digits.insert(digits.size() - 3, ".");
  return digits;
}

}  // namespace smr
