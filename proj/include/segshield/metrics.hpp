#pragma once

#include <array>
#include <set>
#include <vector>

#include "segshield/masks.hpp"
#include "segshield/tensor.hpp"

namespace segshield::metrics {

// |a∩b| / |a∪b|. Both empty -> 1, exactly one empty -> 0.
double iou(const BinaryMask& a, const BinaryMask& b);

double mse(const numcore::Tensor& x, const numcore::Tensor& y);
double linf(const numcore::Tensor& x, const numcore::Tensor& y);
double l2(const numcore::Tensor& x, const numcore::Tensor& y);

// Average of per-mask-ID IoU over `reference`'s ids; ids missing from `other`
// contribute 0 (mask destroyed).
double mean_iou(const MaskSet& reference, const MaskSet& other);

// One 3x3 grid outcome: which cells hold a target, which cells were predicted.
struct GridOutcome {
  std::array<bool, 9> truth{};
  std::set<int> predicted;
};

struct ScoreReport {
  double precision = 0.0, recall = 0.0, f1 = 0.0;  // means over permutations
  double precision_std = 0.0, recall_std = 0.0, f1_std = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;  // totals over all grids and permutations
  std::vector<double> per_perm_precision, per_perm_recall, per_perm_f1;
  bool precision_undefined = false;  // some permutation had zero predictions
};

// Binary-classification scoring over 3x3 grids. outcomes[r] holds the grids of
// permutation repeat r; precision/recall/F1 are computed per repeat, then the
// report carries their mean and population std. Precision with zero
// predictions is reported as 0 with the undefined flag raised.
ScoreReport score_grid(const std::vector<std::vector<GridOutcome>>& outcomes_per_permutation);

}  // namespace segshield::metrics
