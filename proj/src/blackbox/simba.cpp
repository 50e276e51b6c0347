#include <cmath>
#include <stdexcept>

#include "segshield/metrics.hpp"
#include "segshield/rng.hpp"
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

Tensor clamp_add(const Tensor& x, const Tensor& dir, double eps) {
  Tensor out = x;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const float v = x.data[i] + static_cast<float>(eps) * dir.data[i];
    out.data[i] = std::min(255.0f, std::max(0.0f, v));
  }
  return out;
}

}  // namespace

Basis make_basis(BasisKind kind, int h, int w, std::uint64_t seed) {
  if (h < 1 || w < 1) throw std::invalid_argument("basis: bad dims");
  Basis basis;
  basis.kind = kind;
  basis.h = h;
  basis.w = w;
  std::int64_t directions = 0;
  if (kind == BasisKind::Pixel) {
    directions = static_cast<std::int64_t>(h) * w;
  } else {
    basis.freq_h = (h + 3) / 4;
    basis.freq_w = (w + 3) / 4;
    directions = static_cast<std::int64_t>(basis.freq_h) * basis.freq_w;
  }
  basis.order.resize(static_cast<std::size_t>(directions));
  for (std::size_t i = 0; i < basis.order.size(); ++i) basis.order[i] = static_cast<int>(i);
  Rng rng = Rng(seed).substream("basis");
  rng.shuffle(basis.order);
  return basis;
}

Tensor basis_direction(const Basis& basis, int order_index) {
  if (order_index < 0 || order_index >= static_cast<int>(basis.order.size()))
    throw std::invalid_argument("basis direction index out of range");
  const int idx = basis.order[static_cast<std::size_t>(order_index)];
  Tensor dir = Tensor::zeros({basis.h, basis.w});
  if (basis.kind == BasisKind::Pixel) {
    dir.data[static_cast<std::size_t>(idx)] = 1.0f;
    return dir;
  }
  // low-frequency DCT atom (u,v): outer product of the 1-D cosine modes
  const int u = idx / basis.freq_w;
  const int v = idx % basis.freq_w;
  const double pi = 3.14159265358979323846;
  const double su = u == 0 ? std::sqrt(1.0 / basis.h) : std::sqrt(2.0 / basis.h);
  const double sv = v == 0 ? std::sqrt(1.0 / basis.w) : std::sqrt(2.0 / basis.w);
  for (int y = 0; y < basis.h; ++y) {
    const double cy = std::cos(pi * (2.0 * y + 1.0) * u / (2.0 * basis.h));
    for (int x = 0; x < basis.w; ++x) {
      const double cx = std::cos(pi * (2.0 * x + 1.0) * v / (2.0 * basis.w));
      dir.at2(y, x) = static_cast<float>(su * sv * cy * cx);
    }
  }
  return dir;
}

QueryFn make_query(const SegModel& model, PointPrompt prompt) {
  return {[&model, prompt](const Tensor& image) { return model.predict(image, prompt); }, true};
}

AttackResult simba_attack(const QueryFn& query, const Tensor& image, const AttackObjective& objective,
                          double eps, std::int64_t max_queries, const Basis& basis, double stop_iou) {
  if (image.dims.size() != 2 || image.dims[0] != basis.h || image.dims[1] != basis.w)
    throw std::invalid_argument("simba: image dims do not match basis");
  if (eps <= 0.0 || max_queries < 1) throw std::invalid_argument("simba: eps must be > 0 and budget >= 1");

  AttackResult result;
  std::int64_t queries = 0;
  auto probe = [&](const Tensor& x) {
    try {
      Tensor probs = query.fn(x);
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
  if (target_mask.h != image.dims[0] || target_mask.w != image.dims[1])
    throw std::invalid_argument("simba: target mask dims do not match image");
  const Tensor target = refmodel::mask_to_tensor(target_mask);
  const double stop = std::isnan(stop_iou) ? (objective.mode == ObjectiveMode::Invert ? 0.01 : 0.9) : stop_iou;

  Tensor x = image;
  double loss = loss_vs_target(p0, target);
  BinaryMask current = result.original_mask;
  result.stop_reason = StopReason::MaxIters;

  for (std::size_t d = 0; d < basis.order.size(); ++d) {
    if (queries >= max_queries) {
      result.stop_reason = StopReason::Budget;
      break;
    }
    const Tensor dir = basis_direction(basis, static_cast<int>(d));
    bool accepted = false;
    Tensor cand = clamp_add(x, dir, eps);
    Tensor probs = probe(cand);
    double cand_loss = loss_vs_target(probs, target);
    if (cand_loss < loss) {
      accepted = true;
    } else if (queries < max_queries) {
      cand = clamp_add(x, dir, -eps);
      probs = probe(cand);
      cand_loss = loss_vs_target(probs, target);
      accepted = cand_loss < loss;
    }
    if (accepted) {
      x = std::move(cand);
      loss = cand_loss;
      current = binarize(probs);
    }
    result.iterations = static_cast<int>(d) + 1;
    result.trace.push_back({loss, metrics::iou(current, result.original_mask), 0.0});

    const bool reached = objective.mode == ObjectiveMode::Invert
                             ? metrics::iou(current, result.original_mask) < stop
                             : metrics::iou(current, target_mask) > stop;
    if (reached) {
      result.stop_reason = objective.mode == ObjectiveMode::Invert ? StopReason::StopIou
                                                                   : StopReason::TargetReached;
      break;
    }
  }

  result.queries = queries;
  result.adversarial = std::move(x);
  result.final_mask = current;
  result.final_iou = metrics::iou(result.final_mask, result.original_mask);
  result.final_mse = metrics::mse(result.adversarial, image);
  result.final_linf = metrics::linf(result.adversarial, image);
  result.final_l2 = metrics::l2(result.adversarial, image);
  return result;
}

}  // namespace segshield::blackbox
