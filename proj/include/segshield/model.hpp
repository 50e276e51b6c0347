#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "segshield/graph.hpp"
#include "segshield/masks.hpp"
#include "segshield/rng.hpp"
#include "segshield/scene.hpp"
#include "segshield/tensor.hpp"

namespace segshield::refmodel {

using PointPrompt = Point;

// [H,W] channel with a Gaussian bump exp(-d^2/(2*4^2)) centered at the
// prompt, peak value 1. Throws on out-of-bounds prompts.
numcore::Tensor encode_prompt(PointPrompt prompt, int h, int w);

// Point-promptable fully-convolutional segmentation model: three 3x3 conv
// layers (Cin->16, 16->16, 16->16, bias+ReLU) and a final 1x1 conv to one
// logit channel. Input is the 1/255-normalized image stacked with the prompt
// channel. Immutable once trained; prediction is concurrency-safe.
class SegModel {
 public:
  static constexpr int kHidden = 16;
  static constexpr double kPromptSigma = 4.0;

  SegModel() = default;

  // all parameters uniform in [-0.05, 0.05]
  static SegModel init(std::uint64_t seed, int image_channels = 1);

  std::uint64_t seed() const { return seed_; }
  int image_channels() const { return image_channels_; }
  int input_channels() const { return image_channels_ + 1; }
  static const std::vector<std::string>& param_names();
  std::vector<int> param_dims(const std::string& name) const;

  const numcore::NamedTensors& params() const { return params_; }
  numcore::NamedTensors& mutable_params() { return params_; }

  // probability mask [H,W] in [0,1]; deterministic
  numcore::Tensor predict(const numcore::Tensor& image, PointPrompt prompt) const;

  // J(X) = sum((sigmoid(logits) - Y)^2) and its gradient w.r.t. the raw
  // [0,255] image. One forward + one input-only backward.
  struct LossEval {
    double loss = 0.0;
    numcore::Tensor probs;  // [H,W]
    numcore::Tensor grad;   // [H,W], d loss / d image
  };
  LossEval eval_with_gradient(const numcore::Tensor& image, PointPrompt prompt,
                              const numcore::Tensor& target) const;
  double loss_value(const numcore::Tensor& image, PointPrompt prompt,
                    const numcore::Tensor& target) const;

  // mean binary cross-entropy between sigmoid(logits) and the target mask,
  // with parameter gradients (used by the trainer); `smoothing` maps targets
  // to [a, 1-a]
  struct BceEval {
    double bce = 0.0;
    numcore::NamedTensors param_grads;
  };
  BceEval bce_param_gradients(const numcore::Tensor& image, PointPrompt prompt,
                              const BinaryMask& target, double smoothing = 0.0) const;

 private:
  void build_graph();
  numcore::NamedTensors bind_inputs(const numcore::Tensor& image, PointPrompt prompt,
                                    const numcore::Tensor* target) const;

  std::uint64_t seed_ = 0;
  int image_channels_ = 1;
  numcore::NamedTensors params_;
  numcore::Graph graph_;

  friend SegModel load_checkpoint(const std::filesystem::path&);
};

numcore::Tensor mask_to_tensor(const BinaryMask& m);
BinaryMask complement(const BinaryMask& m);

// Prompts a regular grid of points (step `grid_step`, offset step/2),
// binarizes each prediction at 0.5, discards empty masks, deduplicates pairs
// with IoU > 0.9 keeping the larger area, and returns the k largest keyed by
// their center points. Fewer than k distinct masks sets the shortfall flag.
MaskSet auto_masks(const SegModel& model, const numcore::Tensor& image, int grid_step = 8, int k = 3);

// ---- training ------------------------------------------------------------

struct TrainConfig {
  std::uint64_t seed = 1234;
  int steps = 2000;
  double lr = 0.01;
  int batch = 8;
  // Adam moments
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // fraction of training prompts placed on background with an empty target,
  // teaching the model to stay silent off-shape
  double bg_prompt_fraction = 0.25;
  // target smoothing toward [a, 1-a]; caps trained logit magnitudes so the
  // model stays in a regime where sign-step attacks behave like published ones
  double label_smoothing = 0.05;
  SceneConfig scenes{};
};

struct TrainResult {
  SegModel model;
  std::vector<double> loss_trace;
};

// Deterministic for a given config: identical seeds give bit-identical
// parameters. Throws if the loss goes non-finite (message carries the step).
TrainResult train(const TrainConfig& cfg);

struct HoldoutResult {
  double mean_iou = 0.0;
  std::vector<double> per_prompt;
};

// IoU at threshold 0.5 between prediction and ground truth over fresh scenes.
HoldoutResult holdout_eval(const SegModel& model, std::uint64_t seed, int prompts,
                           const SceneConfig& scenes);

// in-mask prompt near the mask centroid (jitter up to 2 px)
PointPrompt sample_prompt_in_mask(const BinaryMask& mask, Rng& rng);

// ---- checkpoints ----------------------------------------------------------
// JSON sidecar (architecture literal, seed, tensor order) next to a .rtn
// container holding each parameter tensor back to back.

void save_checkpoint(const std::filesystem::path& json_path, const SegModel& model,
                     const std::string& extra_json = "");
SegModel load_checkpoint(const std::filesystem::path& json_path);

}  // namespace segshield::refmodel
