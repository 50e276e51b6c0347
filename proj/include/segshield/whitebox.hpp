#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "segshield/masks.hpp"
#include "segshield/model.hpp"
#include "segshield/tensor.hpp"

namespace segshield::whitebox {

using refmodel::PointPrompt;
using refmodel::SegModel;

enum class ObjectiveMode { Invert, Custom };

// Loss form J(X) = sum((sigmoid(model(p,X)) - Y)^2). Invert derives
// Y = 1 - original binarized mask at attack start; lambda is the recorded
// perturbation-tradeoff weight, unused by the sign-step updates which bound
// the perturbation through epsilon and the iteration budget instead.
struct AttackObjective {
  ObjectiveMode mode = ObjectiveMode::Invert;
  BinaryMask target;  // custom mode only
  double lambda = 0.0;
};

enum class Method { Fgsm, Figa, Jsma, Simba, EnsemblePgd };

struct AttackConfig {
  Method method = Method::Fgsm;
  double epsilon = 1.0;     // step size in [0,255] pixel units
  std::int64_t k = 0;       // figa: gradient entries kept; 0 selects the scaled default
  int max_iters = 200;
  // stop threshold on IoU vs the original mask (invert: stop when below) or
  // vs the target mask (custom: stop when above); NaN selects the mode default
  // of 0.01 / 0.9
  double stop_iou = std::numeric_limits<double>::quiet_NaN();
};

enum class StopReason { StopIou, TargetReached, MaxIters, Budget };
const char* stop_reason_name(StopReason r);

struct TraceEntry {
  double loss = 0.0;
  double iou_vs_original = 0.0;
  double saturated_fraction = 0.0;  // selected entries truncated by the [0,255] clamp
};

struct AttackResult {
  numcore::Tensor adversarial;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  double final_iou = 0.0;   // vs original mask
  double final_mse = 0.0;
  double final_linf = 0.0;
  double final_l2 = 0.0;
  StopReason stop_reason = StopReason::MaxIters;
  std::int64_t queries = 0;  // black-box methods only
  BinaryMask original_mask;
  BinaryMask final_mask;
};

// X' = clamp(X - eps * sign(grad J), 0, 255); entries move by exactly 0 or
// +-eps before clamping (0 only where the gradient is exactly zero).
numcore::Tensor fgsm_star_step(const SegModel& model, PointPrompt prompt, const numcore::Tensor& x,
                               const BinaryMask& target, double eps);

// Same update restricted to the k gradient entries of largest magnitude.
// Entries strictly below the k-th magnitude are zeroed; ties at the threshold
// are kept by ascending linear index until exactly k survive.
numcore::Tensor figa_step(const SegModel& model, PointPrompt prompt, const numcore::Tensor& x,
                          const BinaryMask& target, double eps, std::int64_t k);

// round(2653 * entries / (1024*1024*3)), at least 1 (64x64x1 -> 3)
std::int64_t figa_scaled_k(std::int64_t entries);

// figa's selection rule on a raw gradient: 1 marks the k entries of largest
// magnitude, ties at the k-th magnitude resolved by ascending linear index
std::vector<std::uint8_t> figa_keep_mask(const numcore::Tensor& grad, std::int64_t k);

AttackResult run_attack(const SegModel& model, PointPrompt prompt, const numcore::Tensor& image,
                        const AttackObjective& objective, const AttackConfig& config);

// ---- raster-text targets ---------------------------------------------------

// Binary mask with `text` (A-Z, 0-9, space) rasterized from the built-in 5x7
// font, centered, scaled by a positive integer factor; scale 0 picks the
// largest factor that fits. Throws when the text cannot fit at scale >= 1.
BinaryMask text_target(const std::string& text, int h, int w, int scale = 0);

// 5x7 glyph rows, bit 4 = leftmost column (test oracle hook)
const std::array<std::uint8_t, 7>& glyph_rows(char c);

}  // namespace segshield::whitebox
