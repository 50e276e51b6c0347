#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>

#include "doctest.h"
#include "segshield/metrics.hpp"
#include "segshield/rng.hpp"
#include "segshield/whitebox.hpp"

using namespace segshield;
using numcore::Tensor;
using refmodel::SegModel;
using whitebox::AttackConfig;
using whitebox::AttackObjective;
using whitebox::Method;

namespace {

Tensor random_image(int h, int w, Rng& rng) {
  Tensor img = Tensor::zeros({h, w});
  for (auto& v : img.data) v = static_cast<float>(rng.uniform_int(0, 255));
  return img;
}

BinaryMask random_target(int h, int w, Rng& rng) {
  BinaryMask m(h, w);
  for (auto& v : m.v) v = rng.uniform() < 0.4 ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("figa_keep_mask: top-k selection with index tie-breaks") {
  // v = [3, -5, 1], k=1 -> only index 1 survives
  const Tensor v({3}, {3.0f, -5.0f, 1.0f});
  CHECK(whitebox::figa_keep_mask(v, 1) == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(whitebox::figa_keep_mask(v, 2) == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(whitebox::figa_keep_mask(v, 3) == std::vector<std::uint8_t>{1, 1, 1});

  // ties at the threshold are kept by ascending linear index, exactly k
  const Tensor ties({5}, {2.0f, -2.0f, 2.0f, -2.0f, 2.0f});
  CHECK(whitebox::figa_keep_mask(ties, 2) == std::vector<std::uint8_t>{1, 1, 0, 0, 0});
  CHECK(whitebox::figa_keep_mask(ties, 4) == std::vector<std::uint8_t>{1, 1, 1, 1, 0});

  const Tensor mixed({6}, {1.0f, 4.0f, 4.0f, -7.0f, 4.0f, 0.5f});
  CHECK(whitebox::figa_keep_mask(mixed, 3) == std::vector<std::uint8_t>{0, 1, 1, 1, 0, 0});
}

TEST_CASE("fgsm_star_step: zero gradient leaves the image unchanged") {
  auto model = SegModel::init(17);
  for (const auto& name : SegModel::param_names())
    std::fill(model.mutable_params()[name].data.begin(), model.mutable_params()[name].data.end(), 0.0f);
  Rng rng(1);
  const Tensor x = random_image(16, 16, rng);
  const auto x2 = whitebox::fgsm_star_step(model, {8, 8}, x, random_target(16, 16, rng), 1.0);
  CHECK(std::memcmp(x2.data.data(), x.data.data(), x.data.size() * sizeof(float)) == 0);
}

TEST_CASE("white-box steps: bounded updates and valid pixel range") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = SegModel::init(100 + trial);
    const Tensor x = random_image(16, 12, rng);
    const auto target = random_target(16, 12, rng);
    const double eps = rng.uniform(0.5, 8.0);
    const Point prompt{rng.uniform_int(0, 11), rng.uniform_int(0, 15)};

    const Tensor fgsm = whitebox::fgsm_star_step(model, prompt, x, target, eps);
    const Tensor figa = whitebox::figa_step(model, prompt, x, target, eps, 5);
    for (const Tensor* adv : {&fgsm, &figa}) {
      CHECK(metrics::linf(*adv, x) <= eps + 1e-4);  // float-resolution step
      for (float v : adv->data) {
        CHECK(v >= 0.0f);
        CHECK(v <= 255.0f);
      }
    }
    // every fgsm entry moves by exactly 0 or +-eps before clamping
    const float e = static_cast<float>(eps);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      const float lo = std::max(0.0f, x.data[i] - e);
      const float hi = std::min(255.0f, x.data[i] + e);
      const bool boundary = fgsm.data[i] == lo || fgsm.data[i] == hi || fgsm.data[i] == x.data[i];
      CHECK(boundary);
    }
  }
}

TEST_CASE("figa with k = total entries is bit-identical to fgsm_star") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = SegModel::init(500 + trial);
    const int h = 8 + (trial % 3) * 4;
    const int w = 8 + (trial % 5) * 2;
    const Tensor x = random_image(h, w, rng);
    const auto target = random_target(h, w, rng);
    const double eps = rng.uniform(0.5, 6.0);
    const Point prompt{rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1)};

    const Tensor fgsm = whitebox::fgsm_star_step(model, prompt, x, target, eps);
    const Tensor figa = whitebox::figa_step(model, prompt, x, target, eps, x.size());
    REQUIRE(std::memcmp(fgsm.data.data(), figa.data.data(), fgsm.data.size() * sizeof(float)) == 0);
  }
}

TEST_CASE("figa with k=1 changes at most one entry") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = SegModel::init(900 + trial);
    const Tensor x = random_image(12, 10, rng);
    const auto target = random_target(12, 10, rng);
    const Tensor adv = whitebox::figa_step(model, {5, 6}, x, target, 5.0, 1);
    int changed = 0;
    for (std::size_t i = 0; i < x.data.size(); ++i)
      if (adv.data[i] != x.data[i]) ++changed;
    CHECK(changed <= 1);
  }
}

TEST_CASE("figa_scaled_k follows the entry-count proportionality") {
  CHECK(whitebox::figa_scaled_k(64 * 64) == 3);          // the documented 64x64x1 default
  CHECK(whitebox::figa_scaled_k(1024 * 1024 * 3) == 2653);
  CHECK(whitebox::figa_scaled_k(10) == 1);               // floor at 1
  CHECK(whitebox::figa_scaled_k(128 * 128) == 14);
}

TEST_CASE("run_attack: config validation") {
  const auto model = SegModel::init(1);
  Rng rng(5);
  const Tensor x = random_image(16, 16, rng);
  AttackObjective inv;

  AttackConfig cfg;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(whitebox::run_attack(model, {8, 8}, x, inv, cfg), std::invalid_argument);

  cfg = AttackConfig{};
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(whitebox::run_attack(model, {8, 8}, x, inv, cfg), std::invalid_argument);

  cfg = AttackConfig{};
  cfg.method = Method::Figa;
  cfg.k = 10000;  // more than 16x16 entries
  CHECK_THROWS_AS(whitebox::run_attack(model, {8, 8}, x, inv, cfg), std::invalid_argument);

  cfg = AttackConfig{};
  cfg.method = Method::Simba;
  CHECK_THROWS_AS(whitebox::run_attack(model, {8, 8}, x, inv, cfg), std::invalid_argument);
}

TEST_CASE("run_attack: trace length, clamped output, deterministic") {
  const auto model = SegModel::init(7);
  Rng rng(6);
  const Tensor x = random_image(16, 16, rng);
  AttackConfig cfg;
  cfg.max_iters = 5;
  cfg.stop_iou = -1.0;  // never met, runs all iterations
  const auto a = whitebox::run_attack(model, {8, 8}, x, AttackObjective{}, cfg);
  CHECK(a.iterations == 5);
  CHECK(a.trace.size() == 5);
  CHECK(a.stop_reason == whitebox::StopReason::MaxIters);
  CHECK(metrics::linf(a.adversarial, x) <= 5.0 + 1e-6);
  const auto b = whitebox::run_attack(model, {8, 8}, x, AttackObjective{}, cfg);
  CHECK(std::memcmp(a.adversarial.data.data(), b.adversarial.data.data(),
                    a.adversarial.data.size() * sizeof(float)) == 0);
}

TEST_CASE("jsma is the k=1 extreme: at most one entry changes per iteration") {
  const auto model = SegModel::init(8);
  Rng rng(7);
  const Tensor x = random_image(16, 16, rng);
  AttackConfig cfg;
  cfg.method = Method::Jsma;
  cfg.epsilon = 5.0;
  cfg.max_iters = 4;
  cfg.stop_iou = -1.0;
  const auto r = whitebox::run_attack(model, {4, 4}, x, AttackObjective{}, cfg);
  std::int64_t changed = 0;
  for (std::size_t i = 0; i < x.data.size(); ++i)
    if (r.adversarial.data[i] != x.data[i]) ++changed;
  CHECK(changed <= 4);
}

TEST_CASE("text_target: glyph table, centering, area, errors") {
  // "I" at scale 1 reproduces the 5x7 glyph pattern
  const auto& rows = whitebox::glyph_rows('I');
  const BinaryMask m = whitebox::text_target("I", 7, 5, 1);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 5; ++x)
      CHECK(m.at(y, x) == ((rows[static_cast<std::size_t>(y)] >> (4 - x)) & 1));

  CHECK(whitebox::text_target("", 64, 64).empty());

  // mask area equals the summed glyph popcounts at the chosen scale
  for (int scale : {1, 2}) {
    const std::string text = "HELLO";
    std::int64_t bits = 0;
    for (char c : text)
      for (auto row : whitebox::glyph_rows(c)) bits += __builtin_popcount(row);
    const BinaryMask hello = whitebox::text_target(text, 64, 64, scale);
    CHECK(hello.area() == bits * scale * scale);
  }

  // auto-scale picks the largest fitting factor
  const BinaryMask autoscaled = whitebox::text_target("HI", 64, 64, 0);
  CHECK(autoscaled.area() > 0);

  CHECK_THROWS_AS(whitebox::text_target("TOO LONG FOR WIDTH", 16, 16), std::invalid_argument);
  CHECK_THROWS_AS(whitebox::text_target("lower", 64, 64), std::invalid_argument);
  CHECK_THROWS_AS(whitebox::text_target("A?B", 64, 64), std::invalid_argument);
}
