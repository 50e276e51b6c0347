#include <cmath>
#include <set>
#include <stdexcept>

#include "segshield/metrics.hpp"
#include "segshield/blackbox.hpp"

namespace segshield::blackbox {

using numcore::Tensor;

namespace {

double loss_vs_target(const Tensor& probs, const Tensor& target) {
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.data.size(); ++i) {
    const double d = static_cast<double>(probs.data[i]) - target.data[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

Ensemble::Ensemble(std::vector<SegModel> models, std::vector<double> w)
    : surrogates(std::move(models)), weights(std::move(w)) {
  if (surrogates.size() < 2) throw std::invalid_argument("ensemble needs at least 2 surrogates");
  std::set<std::uint64_t> seeds;
  for (const auto& m : surrogates) seeds.insert(m.seed());
  if (seeds.size() != surrogates.size())
    throw std::invalid_argument("ensemble surrogates must have distinct seeds");
  if (weights.empty()) weights.assign(surrogates.size(), 1.0 / static_cast<double>(surrogates.size()));
  if (weights.size() != surrogates.size())
    throw std::invalid_argument("ensemble weight count does not match surrogates");
  double sum = 0.0;
  for (double x : weights) {
    if (x < 0.0) throw std::invalid_argument("ensemble weights must be nonnegative");
    sum += x;
  }
  if (sum <= 0.0) throw std::invalid_argument("ensemble weights sum to zero");
  for (double& x : weights) x /= sum;
}

AttackResult ensemble_pgd_attack(const QueryFn& victim, const Ensemble& ensemble, const Tensor& image,
                                 PointPrompt prompt, const AttackObjective& objective, double eps_step,
                                 double eps_ball, int iters, double stop_iou) {
  if (eps_step <= 0.0 || eps_ball < 0.0 || iters < 1)
    throw std::invalid_argument("ensemble-pgd: eps_step > 0, eps_ball >= 0, iters >= 1 required");

  AttackResult result;
  std::int64_t queries = 0;
  auto probe = [&](const Tensor& x) {
    try {
      Tensor probs = victim.fn(x);
      ++queries;
      return probs;
    } catch (const std::exception& e) {
      throw std::runtime_error("query " + std::to_string(queries) + " failed: " + e.what());
    }
  };

  const Tensor p0 = probe(image);
  result.original_mask = binarize(p0);
  const BinaryMask target_mask = objective.mode == ObjectiveMode::Invert
                                     ? refmodel::complement(result.original_mask)
                                     : objective.target;
  const Tensor target = refmodel::mask_to_tensor(target_mask);
  const double stop = std::isnan(stop_iou) ? (objective.mode == ObjectiveMode::Invert ? 0.01 : 0.9) : stop_iou;

  Tensor x = image;
  Tensor best = image;
  BinaryMask best_mask = result.original_mask;
  double best_loss = loss_vs_target(p0, target);
  result.stop_reason = StopReason::MaxIters;

  const float lo_ball = -static_cast<float>(eps_ball);
  const float hi_ball = static_cast<float>(eps_ball);

  for (int iter = 1; iter <= iters; ++iter) {
    // sign step on the weight-averaged surrogate gradient
    std::vector<double> avg(x.data.size(), 0.0);
    for (std::size_t s = 0; s < ensemble.surrogates.size(); ++s) {
      const auto ev = ensemble.surrogates[s].eval_with_gradient(x, prompt, target);
      const double w = ensemble.weights[s];
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += w * ev.grad.data[i];
    }
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      const double g = avg[i];
      const float step = g > 0.0 ? static_cast<float>(eps_step) : (g < 0.0 ? -static_cast<float>(eps_step) : 0.0f);
      float v = x.data[i] - step;
      // project into the L-inf ball around the original, then into pixel range
      const float delta = std::min(hi_ball, std::max(lo_ball, v - image.data[i]));
      v = image.data[i] + delta;
      x.data[i] = std::min(255.0f, std::max(0.0f, v));
    }

    const Tensor probs = probe(x);
    const double victim_loss = loss_vs_target(probs, target);
    const BinaryMask current = binarize(probs);
    const double iou_orig = metrics::iou(current, result.original_mask);
    result.trace.push_back({victim_loss, iou_orig, 0.0});
    result.iterations = iter;
    if (victim_loss < best_loss) {
      best_loss = victim_loss;
      best = x;
      best_mask = current;
    }
    const bool reached = objective.mode == ObjectiveMode::Invert
                             ? iou_orig < stop
                             : metrics::iou(current, target_mask) > stop;
    if (reached) {
      result.stop_reason = objective.mode == ObjectiveMode::Invert ? StopReason::StopIou
                                                                   : StopReason::TargetReached;
      break;
    }
  }

  result.queries = queries;
  result.adversarial = std::move(best);
  result.final_mask = best_mask;
  result.final_iou = metrics::iou(result.final_mask, result.original_mask);
  result.final_mse = metrics::mse(result.adversarial, image);
  result.final_linf = metrics::linf(result.adversarial, image);
  result.final_l2 = metrics::l2(result.adversarial, image);
  return result;
}

}  // namespace segshield::blackbox
