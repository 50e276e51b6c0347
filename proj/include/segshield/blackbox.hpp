#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "segshield/model.hpp"
#include "segshield/tensor.hpp"
#include "segshield/whitebox.hpp"

namespace segshield::blackbox {

using refmodel::PointPrompt;
using refmodel::SegModel;
using whitebox::AttackObjective;
using whitebox::AttackResult;
using whitebox::ObjectiveMode;
using whitebox::StopReason;

// Orthonormal type-II 2D DCT over [H,W] tensors (and its inverse).
// idct2(dct2(x)) round-trips within 1e-4 on [0,255]-scale inputs.
numcore::Tensor dct2(const numcore::Tensor& x);
numcore::Tensor idct2(const numcore::Tensor& coeffs);

enum class BasisKind { Pixel, DctLowFrequency };

// Seeded permutation over an orthonormal direction family. The DCT variant
// restricts to the lowest ceil(H/4) x ceil(W/4) frequencies.
struct Basis {
  BasisKind kind = BasisKind::Pixel;
  int h = 0, w = 0;
  int freq_h = 0, freq_w = 0;     // dct-low-frequency block
  std::vector<int> order;         // permuted direction indices
};

Basis make_basis(BasisKind kind, int h, int w, std::uint64_t seed);

// spatial direction vector for basis.order[i] (unit L2 norm)
numcore::Tensor basis_direction(const Basis& basis, int order_index);

// Victim oracle: probability mask only, no gradients. concurrent_safe
// declares whether the function may be invoked from several threads at once.
struct QueryFn {
  std::function<numcore::Tensor(const numcore::Tensor&)> fn;
  bool concurrent_safe = true;
};

QueryFn make_query(const SegModel& model, PointPrompt prompt);

// Greedy coordinate descent: for each direction q in permuted order try
// X+eps*q, keep on loss decrease, else try X-eps*q, else discard. Stops at
// max_queries (the budget counts every query, including the baseline) or at
// the stop IoU. Accepted-step losses are non-increasing by construction.
AttackResult simba_attack(const QueryFn& query, const numcore::Tensor& image,
                          const AttackObjective& objective, double eps, std::int64_t max_queries,
                          const Basis& basis,
                          double stop_iou = std::numeric_limits<double>::quiet_NaN());

// >= 2 surrogate models with normalized nonnegative weights
struct Ensemble {
  std::vector<SegModel> surrogates;
  std::vector<double> weights;

  explicit Ensemble(std::vector<SegModel> models, std::vector<double> w = {});
};

// One PGD step per outer iteration on the weight-averaged surrogate loss
// (sign of averaged gradient, step eps_step, projected into the L-inf ball
// eps_ball around the original image, clamped to [0,255]); the victim is
// queried once per iteration and the perturbation with the best victim loss
// seen is returned.
AttackResult ensemble_pgd_attack(const QueryFn& victim, const Ensemble& ensemble,
                                 const numcore::Tensor& image, PointPrompt prompt,
                                 const AttackObjective& objective, double eps_step, double eps_ball,
                                 int iters,
                                 double stop_iou = std::numeric_limits<double>::quiet_NaN());

}  // namespace segshield::blackbox
