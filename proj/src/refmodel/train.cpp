#include <cmath>
#include <stdexcept>

#include "segshield/metrics.hpp"
#include "segshield/model.hpp"
#include "segshield/rng.hpp"

namespace segshield::refmodel {

namespace {

// prompt on background, at least 2 px away from every shape mask
PointPrompt sample_bg_prompt(const ShapeScene& scene, Rng& rng) {
  const int h = scene.image.dims[0], w = scene.image.dims[1];
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int x = rng.uniform_int(0, w - 1);
    const int y = rng.uniform_int(0, h - 1);
    bool clear = true;
    for (const auto& m : scene.truth) {
      for (int dy = -2; dy <= 2 && clear; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy >= 0 && yy < h && xx >= 0 && xx < w && m.at(yy, xx)) {
            clear = false;
            break;
          }
        }
      }
      if (!clear) break;
    }
    if (clear) return {x, y};
  }
  return {0, 0};  // corners are background under the placement margins
}

}  // namespace

TrainResult train(const TrainConfig& cfg) {
  if (cfg.steps < 1 || cfg.batch < 1 || cfg.lr <= 0.0)
    throw std::invalid_argument("train: steps/batch must be >= 1 and lr > 0");

  TrainResult result;
  result.model = SegModel::init(cfg.seed);
  SegModel& model = result.model;
  Rng rng = Rng(cfg.seed).substream("train");

  std::map<std::string, std::vector<double>> grad_acc, adam_m, adam_v;
  for (const auto& name : SegModel::param_names()) {
    const auto n = static_cast<std::size_t>(numcore::dim_product(model.param_dims(name)));
    grad_acc[name] = std::vector<double>(n, 0.0);
    adam_m[name] = std::vector<double>(n, 0.0);
    adam_v[name] = std::vector<double>(n, 0.0);
  }

  for (int step = 0; step < cfg.steps; ++step) {
    for (auto& [name, acc] : grad_acc) std::fill(acc.begin(), acc.end(), 0.0);
    double batch_loss = 0.0;

    try {
      for (int b = 0; b < cfg.batch; ++b) {
        const ShapeScene scene = generate_scene(rng.next_u64(), cfg.scenes);
        PointPrompt prompt;
        BinaryMask target;
        if (rng.uniform() < cfg.bg_prompt_fraction) {
          prompt = sample_bg_prompt(scene, rng);
          target = BinaryMask(scene.image.dims[0], scene.image.dims[1]);
        } else {
          const int shape_idx = rng.uniform_int(0, static_cast<int>(scene.truth.size()) - 1);
          target = scene.truth[static_cast<std::size_t>(shape_idx)];
          prompt = sample_prompt_in_mask(target, rng);
        }
        const auto ev = model.bce_param_gradients(scene.image, prompt, target, cfg.label_smoothing);
        batch_loss += ev.bce;
        for (const auto& [name, grad] : ev.param_grads) {
          auto& acc = grad_acc[name];
          for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += grad.data[i];
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("training diverged at step " + std::to_string(step) + ": " + e.what());
    }
    batch_loss /= cfg.batch;
    result.loss_trace.push_back(batch_loss);
    if (!std::isfinite(batch_loss))
      throw std::runtime_error("training diverged (non-finite loss) at step " + std::to_string(step));

    // Adam update on the batch-mean gradient, moments kept in double
    const double t = step + 1;
    const double bias1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.adam_beta2, t);
    for (const auto& name : SegModel::param_names()) {
      auto& m = adam_m[name];
      auto& v = adam_v[name];
      auto& p = model.mutable_params()[name];
      const auto& acc = grad_acc[name];
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double g = acc[i] / cfg.batch;
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g;
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g * g;
        const double update = cfg.lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + cfg.adam_eps);
        p.data[i] = static_cast<float>(p.data[i] - update);
        if (!std::isfinite(p.data[i]))
          throw std::runtime_error("training diverged (non-finite parameter) at step " + std::to_string(step));
      }
    }
  }
  return result;
}

HoldoutResult holdout_eval(const SegModel& model, std::uint64_t seed, int prompts,
                           const SceneConfig& scenes) {
  HoldoutResult result;
  Rng rng = Rng(seed).substream("holdout");
  for (int i = 0; i < prompts; ++i) {
    const ShapeScene scene = generate_scene(rng.next_u64(), scenes);
    const int shape_idx = rng.uniform_int(0, static_cast<int>(scene.truth.size()) - 1);
    const BinaryMask& truth = scene.truth[static_cast<std::size_t>(shape_idx)];
    const PointPrompt prompt = sample_prompt_in_mask(truth, rng);
    const BinaryMask predicted = binarize(model.predict(scene.image, prompt));
    result.per_prompt.push_back(metrics::iou(predicted, truth));
  }
  double sum = 0.0;
  for (double v : result.per_prompt) sum += v;
  result.mean_iou = result.per_prompt.empty() ? 0.0 : sum / static_cast<double>(result.per_prompt.size());
  return result;
}

}  // namespace segshield::refmodel
