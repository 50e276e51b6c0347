#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "segshield/metrics.hpp"
#include "segshield/whitebox.hpp"

namespace segshield::whitebox {

using numcore::Tensor;

namespace {

float sign_of(float v) { return v > 0.0f ? 1.0f : (v < 0.0f ? -1.0f : 0.0f); }

struct StepStats {
  std::int64_t selected = 0;
  std::int64_t saturated = 0;
};

// applies x' = clamp(x - eps*sign(g)) over entries flagged in keep (empty keep
// means all)
Tensor apply_signed_step(const Tensor& x, const Tensor& grad, double eps,
                         const std::vector<std::uint8_t>* keep, StepStats* stats) {
  Tensor out = x;
  const float e = static_cast<float>(eps);
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    if (keep != nullptr && !(*keep)[i]) continue;
    const float s = sign_of(grad.data[i]);
    if (s == 0.0f) continue;
    if (stats != nullptr) ++stats->selected;
    const float proposed = x.data[i] - e * s;
    const float clamped = std::min(255.0f, std::max(0.0f, proposed));
    if (stats != nullptr && clamped != proposed) ++stats->saturated;
    out.data[i] = clamped;
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> figa_keep_mask(const Tensor& grad, std::int64_t k) {
  const std::int64_t n = grad.size();
  std::vector<float> mags(grad.data.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(grad.data[i]);
  if (k >= n) return std::vector<std::uint8_t>(mags.size(), 1);

  std::vector<float> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(), std::greater<float>());
  const float threshold = sorted[static_cast<std::size_t>(k - 1)];

  std::vector<std::uint8_t> keep(mags.size(), 0);
  std::int64_t kept = 0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (mags[i] > threshold) {
      keep[i] = 1;
      ++kept;
    }
  }
  for (std::size_t i = 0; i < mags.size() && kept < k; ++i) {
    if (!keep[i] && mags[i] == threshold) {
      keep[i] = 1;
      ++kept;
    }
  }
  return keep;
}

namespace {

void validate_target(const Tensor& x, const BinaryMask& target) {
  if (target.h != x.dims[0] || target.w != x.dims[1])
    throw std::invalid_argument("target mask dims do not match image");
}

}  // namespace

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::StopIou: return "stop-iou";
    case StopReason::TargetReached: return "target-reached";
    case StopReason::MaxIters: return "max-iters";
    case StopReason::Budget: return "budget";
  }
  return "?";
}

Tensor fgsm_star_step(const SegModel& model, PointPrompt prompt, const Tensor& x,
                      const BinaryMask& target, double eps) {
  validate_target(x, target);
  const auto ev = model.eval_with_gradient(x, prompt, refmodel::mask_to_tensor(target));
  return apply_signed_step(x, ev.grad, eps, nullptr, nullptr);
}

Tensor figa_step(const SegModel& model, PointPrompt prompt, const Tensor& x,
                 const BinaryMask& target, double eps, std::int64_t k) {
  validate_target(x, target);
  if (k < 1 || k > x.size())
    throw std::invalid_argument("figa: k must be within 1..entries, got " + std::to_string(k));
  const auto ev = model.eval_with_gradient(x, prompt, refmodel::mask_to_tensor(target));
  const auto keep = figa_keep_mask(ev.grad, k);
  return apply_signed_step(x, ev.grad, eps, &keep, nullptr);
}

std::int64_t figa_scaled_k(std::int64_t entries) {
  const double reference = 1024.0 * 1024.0 * 3.0;
  const auto k = static_cast<std::int64_t>(std::llround(2653.0 * static_cast<double>(entries) / reference));
  return std::max<std::int64_t>(1, std::min(k, entries));
}

AttackResult run_attack(const SegModel& model, PointPrompt prompt, const Tensor& image,
                        const AttackObjective& objective, const AttackConfig& config) {
  if (config.max_iters < 1) throw std::invalid_argument("attack: max_iters must be >= 1");
  if (config.epsilon <= 0.0) throw std::invalid_argument("attack: epsilon must be > 0");
  if (config.method != Method::Fgsm && config.method != Method::Figa && config.method != Method::Jsma)
    throw std::invalid_argument("run_attack handles white-box methods only");

  std::int64_t k = 0;
  if (config.method == Method::Figa) {
    k = config.k == 0 ? figa_scaled_k(image.size()) : config.k;
    if (k < 1 || k > image.size()) throw std::invalid_argument("attack: k out of range");
  } else if (config.method == Method::Jsma) {
    k = 1;
  }

  AttackResult result;
  result.original_mask = binarize(model.predict(image, prompt));
  BinaryMask target = objective.mode == ObjectiveMode::Invert ? refmodel::complement(result.original_mask)
                                                              : objective.target;
  validate_target(image, target);
  const Tensor target_t = refmodel::mask_to_tensor(target);

  const double stop = std::isnan(config.stop_iou)
                          ? (objective.mode == ObjectiveMode::Invert ? 0.01 : 0.9)
                          : config.stop_iou;

  Tensor x = image;
  auto ev = model.eval_with_gradient(x, prompt, target_t);
  result.stop_reason = StopReason::MaxIters;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    StepStats stats;
    if (config.method == Method::Fgsm) {
      x = apply_signed_step(x, ev.grad, config.epsilon, nullptr, &stats);
    } else {
      const auto keep = figa_keep_mask(ev.grad, k);
      x = apply_signed_step(x, ev.grad, config.epsilon, &keep, &stats);
    }
    ev = model.eval_with_gradient(x, prompt, target_t);
    const BinaryMask current = binarize(ev.probs);
    const double iou_orig = metrics::iou(current, result.original_mask);
    result.trace.push_back({ev.loss, iou_orig,
                            stats.selected > 0 ? static_cast<double>(stats.saturated) / stats.selected : 0.0});
    result.iterations = iter;
    if (objective.mode == ObjectiveMode::Invert) {
      if (iou_orig < stop) {
        result.stop_reason = StopReason::StopIou;
        break;
      }
    } else {
      if (metrics::iou(current, target) > stop) {
        result.stop_reason = StopReason::TargetReached;
        break;
      }
    }
  }

  result.adversarial = std::move(x);
  result.final_mask = binarize(ev.probs);
  result.final_iou = metrics::iou(result.final_mask, result.original_mask);
  result.final_mse = metrics::mse(result.adversarial, image);
  result.final_linf = metrics::linf(result.adversarial, image);
  result.final_l2 = metrics::l2(result.adversarial, image);
  return result;
}

}  // namespace segshield::whitebox
