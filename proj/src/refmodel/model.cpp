#include "segshield/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "segshield/metrics.hpp"
#include "segshield/rng.hpp"

namespace segshield::refmodel {

using numcore::NamedTensors;
using numcore::Tensor;

Tensor encode_prompt(PointPrompt prompt, int h, int w) {
  if (prompt.x < 0 || prompt.x >= w || prompt.y < 0 || prompt.y >= h)
    throw std::invalid_argument("prompt (" + std::to_string(prompt.x) + "," + std::to_string(prompt.y) +
                                ") out of bounds for " + std::to_string(h) + "x" + std::to_string(w));
  Tensor channel = Tensor::zeros({h, w});
  const double two_sigma_sq = 2.0 * SegModel::kPromptSigma * SegModel::kPromptSigma;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d2 = static_cast<double>(x - prompt.x) * (x - prompt.x) +
                        static_cast<double>(y - prompt.y) * (y - prompt.y);
      channel.at2(y, x) = static_cast<float>(std::exp(-d2 / two_sigma_sq));
    }
  }
  return channel;
}

const std::vector<std::string>& SegModel::param_names() {
  static const std::vector<std::string> names = {"w1", "b1", "w2", "b2", "w3", "b3", "w4", "b4"};
  return names;
}

std::vector<int> SegModel::param_dims(const std::string& name) const {
  const int cin = input_channels();
  if (name == "w1") return {kHidden, cin, 3, 3};
  if (name == "w2" || name == "w3") return {kHidden, kHidden, 3, 3};
  if (name == "w4") return {1, kHidden, 1, 1};
  if (name == "b1" || name == "b2" || name == "b3") return {kHidden};
  if (name == "b4") return {1};
  throw std::invalid_argument("unknown parameter '" + name + "'");
}

SegModel SegModel::init(std::uint64_t seed, int image_channels) {
  if (image_channels < 1) throw std::invalid_argument("image_channels must be >= 1");
  SegModel m;
  m.seed_ = seed;
  m.image_channels_ = image_channels;
  Rng rng = Rng(seed).substream("init");
  for (const auto& name : param_names()) {
    Tensor t = Tensor::zeros(m.param_dims(name));
    for (auto& v : t.data) v = static_cast<float>(rng.uniform(-0.05, 0.05));
    m.params_[name] = std::move(t);
  }
  m.build_graph();
  return m;
}

void SegModel::build_graph() {
  numcore::Graph g;
  g.add_input("x");
  g.add_input("y");
  for (const auto& name : param_names()) g.add_input(name);
  g.add_node("c1", numcore::OpKind::Conv2dSame, {"x", "w1"});
  g.add_node("z1", numcore::OpKind::AddBias, {"c1", "b1"});
  g.add_node("r1", numcore::OpKind::Relu, {"z1"});
  g.add_node("c2", numcore::OpKind::Conv2dSame, {"r1", "w2"});
  g.add_node("z2", numcore::OpKind::AddBias, {"c2", "b2"});
  g.add_node("r2", numcore::OpKind::Relu, {"z2"});
  g.add_node("c3", numcore::OpKind::Conv2dSame, {"r2", "w3"});
  g.add_node("z3", numcore::OpKind::AddBias, {"c3", "b3"});
  g.add_node("r3", numcore::OpKind::Relu, {"z3"});
  g.add_node("c4", numcore::OpKind::Conv2dSame, {"r3", "w4"});
  g.add_node("logits", numcore::OpKind::AddBias, {"c4", "b4"});
  g.add_node("probs", numcore::OpKind::Sigmoid, {"logits"});
  g.add_node("diff", numcore::OpKind::Subtract, {"probs", "y"});
  g.add_node("sq", numcore::OpKind::Square, {"diff"});
  g.add_node("loss", numcore::OpKind::Sum, {"sq"});
  graph_ = std::move(g);
}

NamedTensors SegModel::bind_inputs(const Tensor& image, PointPrompt prompt, const Tensor* target) const {
  if (params_.empty()) throw std::runtime_error("model has no parameters (not initialized)");
  if (image.dims.size() != 2)
    throw std::runtime_error("shape mismatch: expected [H,W] image, got " + numcore::dims_str(image.dims));
  const int h = image.dims[0], w = image.dims[1];
  const Tensor bump = encode_prompt(prompt, h, w);
  Tensor x = Tensor::zeros({input_channels(), h, w});
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  for (std::size_t i = 0; i < plane; ++i) x.data[i] = image.data[i] * (1.0f / 255.0f);
  for (std::size_t i = 0; i < plane; ++i) x.data[plane + i] = bump.data[i];

  NamedTensors inputs = params_;
  inputs["x"] = std::move(x);
  if (target != nullptr) {
    if (target->dims != image.dims)
      throw std::runtime_error("shape mismatch: target " + numcore::dims_str(target->dims) +
                               " vs image " + numcore::dims_str(image.dims));
    Tensor y = Tensor::zeros({1, h, w});
    std::copy(target->data.begin(), target->data.end(), y.data.begin());
    inputs["y"] = std::move(y);
  } else {
    inputs["y"] = Tensor::zeros({1, h, w});
  }
  return inputs;
}

namespace {

Tensor plane_to_hw(const Tensor& t) {
  return Tensor({t.dims[1], t.dims[2]}, t.data);
}

}  // namespace

Tensor SegModel::predict(const Tensor& image, PointPrompt prompt) const {
  numcore::ForwardPass fp(graph_, bind_inputs(image, prompt, nullptr));
  return plane_to_hw(fp.value("probs"));
}

SegModel::LossEval SegModel::eval_with_gradient(const Tensor& image, PointPrompt prompt,
                                                const Tensor& target) const {
  numcore::ForwardPass fp(graph_, bind_inputs(image, prompt, &target));
  LossEval ev;
  ev.loss = fp.value("loss").data[0];
  ev.probs = plane_to_hw(fp.value("probs"));
  static const std::set<std::string> wanted{"x"};
  auto grads = numcore::backward(fp, "loss", Tensor::scalar(1.0f), &wanted);
  const Tensor& gx = grads.at("x");
  const int h = image.dims[0], w = image.dims[1];
  ev.grad = Tensor::zeros({h, w});
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  // d(image)/d(raw pixel) carries the 1/255 normalization
  for (std::size_t i = 0; i < plane; ++i) ev.grad.data[i] = gx.data[i] * (1.0f / 255.0f);
  return ev;
}

double SegModel::loss_value(const Tensor& image, PointPrompt prompt, const Tensor& target) const {
  numcore::ForwardPass fp(graph_, bind_inputs(image, prompt, &target));
  return fp.value("loss").data[0];
}

SegModel::BceEval SegModel::bce_param_gradients(const Tensor& image, PointPrompt prompt,
                                                const BinaryMask& target, double smoothing) const {
  if (target.h != image.dims[0] || target.w != image.dims[1])
    throw std::runtime_error("shape mismatch: target mask vs image");
  numcore::ForwardPass fp(graph_, bind_inputs(image, prompt, nullptr));
  const Tensor& logits = fp.value("logits");
  const std::size_t n = logits.data.size();

  // stable BCE on logits; cotangent d(bce)/d(logit) = (sigmoid(z) - t) / N
  Tensor cot = Tensor::zeros(logits.dims);
  double bce = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = logits.data[i];
    const double t = target.v[i] * (1.0 - 2.0 * smoothing) + smoothing;
    bce += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));
    const double s = 1.0 / (1.0 + std::exp(-z));
    cot.data[i] = static_cast<float>((s - t) * inv_n);
  }
  bce *= inv_n;

  static const std::set<std::string> wanted{"w1", "b1", "w2", "b2", "w3", "b3", "w4", "b4"};
  BceEval ev;
  ev.bce = bce;
  ev.param_grads = numcore::backward(fp, "logits", cot, &wanted);
  return ev;
}

Tensor mask_to_tensor(const BinaryMask& m) {
  Tensor t = Tensor::zeros({m.h, m.w});
  for (std::size_t i = 0; i < m.v.size(); ++i) t.data[i] = static_cast<float>(m.v[i]);
  return t;
}

BinaryMask complement(const BinaryMask& m) {
  BinaryMask out(m.h, m.w);
  for (std::size_t i = 0; i < m.v.size(); ++i) out.v[i] = m.v[i] ? 0 : 1;
  return out;
}

MaskSet auto_masks(const SegModel& model, const Tensor& image, int grid_step, int k) {
  if (image.dims.size() != 2) throw std::invalid_argument("auto_masks expects an [H,W] image");
  const int h = image.dims[0], w = image.dims[1];
  if (grid_step < 1 || h % grid_step != 0 || w % grid_step != 0)
    throw std::invalid_argument("grid_step must divide the image dims");
  if (k < 1) throw std::invalid_argument("auto_masks: k must be >= 1");

  struct Candidate {
    BinaryMask mask;
    std::int64_t area;
  };
  std::vector<Candidate> candidates;
  for (int y = grid_step / 2; y < h; y += grid_step) {
    for (int x = grid_step / 2; x < w; x += grid_step) {
      BinaryMask m = binarize(model.predict(image, {x, y}));
      const auto area = m.area();
      if (area > 0) candidates.push_back({std::move(m), area});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.area > b.area; });

  // greedy dedup in descending area order: the survivor of any IoU>0.9 pair
  // is the larger mask
  std::vector<Candidate> kept;
  for (auto& c : candidates) {
    bool duplicate = false;
    for (const auto& kc : kept) {
      if (metrics::iou(kc.mask, c.mask) > 0.9) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(std::move(c));
  }

  MaskSet out;
  for (auto& c : kept) {
    if (static_cast<int>(out.entries.size()) == k) break;
    const Point id = center_point(c.mask);
    if (out.find(id) != nullptr) continue;  // ids must be unique
    out.entries.push_back({id, std::move(c.mask), c.area});
  }
  out.shortfall = static_cast<int>(out.entries.size()) < k;
  return out;
}

PointPrompt sample_prompt_in_mask(const BinaryMask& mask, Rng& rng) {
  const auto area = mask.area();
  if (area == 0) throw std::invalid_argument("cannot sample a prompt from an empty mask");
  std::int64_t target = rng.uniform_int(0, static_cast<int>(area - 1));
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      if (mask.at(y, x) && target-- == 0) return {x, y};
    }
  }
  return center_point(mask);  // unreachable
}

}  // namespace segshield::refmodel
