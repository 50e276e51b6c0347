#include "segshield/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace segshield::metrics {

namespace {

void require_same_dims(const numcore::Tensor& x, const numcore::Tensor& y) {
  if (!x.same_dims(y))
    throw std::invalid_argument("dim mismatch: " + numcore::dims_str(x.dims) + " vs " +
                                numcore::dims_str(y.dims));
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  // the mean of identical values is that value, bit-exactly; keeps
  // permutation-equivariant detectors at zero std
  bool all_equal = true;
  for (double x : v) all_equal = all_equal && x == v.front();
  if (all_equal) return v.front();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.h != b.h || a.w != b.w)
    throw std::invalid_argument("dim mismatch: masks " + std::to_string(a.h) + "x" + std::to_string(a.w) +
                                " vs " + std::to_string(b.h) + "x" + std::to_string(b.w));
  std::int64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    inter += a.v[i] & b.v[i];
    uni += a.v[i] | b.v[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double mse(const numcore::Tensor& x, const numcore::Tensor& y) {
  require_same_dims(x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double d = static_cast<double>(x.data[i]) - y.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.data.size());
}

double linf(const numcore::Tensor& x, const numcore::Tensor& y) {
  require_same_dims(x, y);
  double m = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(x.data[i]) - y.data[i]));
  return m;
}

double l2(const numcore::Tensor& x, const numcore::Tensor& y) {
  require_same_dims(x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double d = static_cast<double>(x.data[i]) - y.data[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double mean_iou(const MaskSet& reference, const MaskSet& other) {
  if (reference.entries.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& e : reference.entries) {
    const MaskEntry* match = other.find(e.id);
    if (match != nullptr) acc += iou(e.mask, match->mask);
  }
  return acc / static_cast<double>(reference.entries.size());
}

ScoreReport score_grid(const std::vector<std::vector<GridOutcome>>& outcomes_per_permutation) {
  ScoreReport report;
  for (const auto& grids : outcomes_per_permutation) {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (const auto& grid : grids) {
      for (int cell : grid.predicted) {
        if (cell < 0 || cell > 8) throw std::invalid_argument("predicted cell out of range: " + std::to_string(cell));
      }
      for (int cell = 0; cell < 9; ++cell) {
        const bool is_target = grid.truth[static_cast<std::size_t>(cell)];
        const bool predicted = grid.predicted.count(cell) != 0;
        if (is_target && predicted) ++tp;
        else if (!is_target && predicted) ++fp;
        else if (is_target && !predicted) ++fn;
        else ++tn;
      }
    }
    report.tp += tp;
    report.fp += fp;
    report.fn += fn;
    report.tn += tn;
    double precision = 0.0;
    if (tp + fp == 0) {
      report.precision_undefined = true;
    } else {
      precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    const double recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    report.per_perm_precision.push_back(precision);
    report.per_perm_recall.push_back(recall);
    report.per_perm_f1.push_back(f1);
  }
  report.precision = mean_of(report.per_perm_precision);
  report.recall = mean_of(report.per_perm_recall);
  report.f1 = mean_of(report.per_perm_f1);
  report.precision_std = std_of(report.per_perm_precision, report.precision);
  report.recall_std = std_of(report.per_perm_recall, report.recall);
  report.f1_std = std_of(report.per_perm_f1, report.f1);
  return report;
}

}  // namespace segshield::metrics
