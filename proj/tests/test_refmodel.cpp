#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "segshield/metrics.hpp"
#include "segshield/model.hpp"
#include "segshield/rng.hpp"

using namespace segshield;
using refmodel::SceneConfig;
using refmodel::SegModel;

namespace {

bool bitwise_equal(const numcore::Tensor& a, const numcore::Tensor& b) {
  return a.dims == b.dims &&
         std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0;
}

SceneConfig small_scenes() {
  SceneConfig cfg;
  cfg.height = 48;
  cfg.width = 48;
  cfg.max_shapes = 2;
  cfg.max_extent = 8;
  return cfg;
}

refmodel::TrainConfig tiny_train() {
  refmodel::TrainConfig cfg;
  cfg.steps = 25;
  cfg.batch = 2;
  cfg.scenes = small_scenes();
  return cfg;
}

}  // namespace

TEST_CASE("encode_prompt: peak, falloff, bounds") {
  const auto channel = refmodel::encode_prompt({10, 10}, 64, 64);
  CHECK(channel.at2(10, 10) == 1.0f);
  CHECK(channel.at2(10, 14) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));  // distance 4
  CHECK(channel.at2(10, 30) < 1e-5);                                            // distance 20
  CHECK_THROWS_AS(refmodel::encode_prompt({64, 10}, 64, 64), std::invalid_argument);
  CHECK_THROWS_AS(refmodel::encode_prompt({-1, 0}, 64, 64), std::invalid_argument);
}

TEST_CASE("generate_scene: determinism") {
  const auto a = refmodel::generate_scene(12345);
  const auto b = refmodel::generate_scene(12345);
  REQUIRE(a.shapes.size() == b.shapes.size());
  CHECK(bitwise_equal(a.image, b.image));
  for (std::size_t i = 0; i < a.truth.size(); ++i) CHECK(a.truth[i].v == b.truth[i].v);
  const auto c = refmodel::generate_scene(12346);
  CHECK(!bitwise_equal(a.image, c.image));
}

TEST_CASE("generate_scene: single disk of radius 8 has the rasterized area") {
  SceneConfig cfg;
  cfg.min_shapes = cfg.max_shapes = 1;
  cfg.min_extent = cfg.max_extent = 8;
  int disks_checked = 0;
  for (std::uint64_t seed = 0; seed < 64 && disks_checked < 5; ++seed) {
    const auto scene = refmodel::generate_scene(seed, cfg);
    if (scene.shapes[0].kind != refmodel::ShapeKind::Disk) continue;
    ++disks_checked;
    const auto area = static_cast<double>(scene.truth[0].area());
    CHECK(area >= 3.14159265 * 7.5 * 7.5);
    CHECK(area <= 3.14159265 * 8.5 * 8.5);
  }
  CHECK(disks_checked == 5);
}

TEST_CASE("generate_scene: 10000-seed sweep has no overlaps, bounds violations or failures") {
  SceneConfig cfg;  // defaults
  int total_shapes = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto scene = refmodel::generate_scene(seed, cfg);
    total_shapes += static_cast<int>(scene.shapes.size());
    for (std::size_t i = 0; i < scene.truth.size(); ++i) {
      for (std::size_t j = i + 1; j < scene.truth.size(); ++j) {
        const auto& a = scene.truth[i];
        const auto& b = scene.truth[j];
        std::int64_t inter = 0;
        for (std::size_t p = 0; p < a.v.size(); ++p) inter += a.v[p] & b.v[p];
        REQUIRE(inter == 0);
      }
    }
    for (const auto& s : scene.shapes) {
      REQUIRE(s.intensity - scene.background >= 40);
      const int ext = s.kind == refmodel::ShapeKind::Disk ? s.r : std::max(s.hx, s.hy);
      REQUIRE(ext >= 6);
      REQUIRE(ext <= 16);
    }
    // masks stay inside the image bounds: border pixels untouched
    for (const auto& m : scene.truth) {
      for (int x = 0; x < m.w; ++x) REQUIRE((m.at(0, x) | m.at(m.h - 1, x)) == 0);
      for (int y = 0; y < m.h; ++y) REQUIRE((m.at(y, 0) | m.at(y, m.w - 1)) == 0);
    }
  }
  CHECK(total_shapes > 10000);
}

TEST_CASE("generate_scene: config validation") {
  SceneConfig bad = small_scenes();
  bad.min_extent = 3;
  CHECK_THROWS_AS(refmodel::generate_scene(1, bad), std::invalid_argument);
  bad = small_scenes();
  bad.shape_intensity_min = bad.bg_max + 10;  // gap below 40
  CHECK_THROWS_AS(refmodel::generate_scene(1, bad), std::invalid_argument);
  bad = small_scenes();
  bad.max_shapes = 5;
  CHECK_THROWS_AS(refmodel::generate_scene(1, bad), std::invalid_argument);
}

TEST_CASE("predict: pure, in range, robust to degenerate input") {
  const auto model = SegModel::init(3);
  const auto scene = refmodel::generate_scene(7, small_scenes());
  const auto a = model.predict(scene.image, {10, 12});
  const auto b = model.predict(scene.image, {10, 12});
  CHECK(bitwise_equal(a, b));
  for (float v : a.data) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  const auto zeros = numcore::Tensor::zeros({48, 48});
  const auto z = model.predict(zeros, {5, 5});
  for (float v : z.data) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  CHECK_THROWS_AS(model.predict(scene.image, {200, 200}), std::invalid_argument);
}

TEST_CASE("untrained model stays below the trained bar") {
  const auto model = SegModel::init(1);
  const auto holdout = refmodel::holdout_eval(model, 999, 40, SceneConfig{});
  CHECK(holdout.mean_iou < 0.5);
}

TEST_CASE("train: deterministic, finite trace, bit-identical parameters") {
  const auto cfg = tiny_train();
  const auto a = refmodel::train(cfg);
  const auto b = refmodel::train(cfg);
  REQUIRE(a.loss_trace.size() == static_cast<std::size_t>(cfg.steps));
  for (double v : a.loss_trace) CHECK(std::isfinite(v));
  for (const auto& name : SegModel::param_names())
    CHECK(bitwise_equal(a.model.params().at(name), b.model.params().at(name)));

  auto other = cfg;
  other.seed = cfg.seed + 1;
  const auto c = refmodel::train(other);
  CHECK(!bitwise_equal(a.model.params().at("w1"), c.model.params().at("w1")));
}

TEST_CASE("train: divergence aborts with the step index") {
  auto cfg = tiny_train();
  cfg.steps = 50;
  cfg.lr = 1e18;
  CHECK_THROWS_WITH_AS(refmodel::train(cfg), doctest::Contains("step"), std::runtime_error);
}

TEST_CASE("train: config validation") {
  auto cfg = tiny_train();
  cfg.steps = 0;
  CHECK_THROWS_AS(refmodel::train(cfg), std::invalid_argument);
}

TEST_CASE("sample_prompt_in_mask lands inside the mask") {
  Rng rng(11);
  const auto scene = refmodel::generate_scene(21, small_scenes());
  for (int i = 0; i < 50; ++i) {
    const auto p = refmodel::sample_prompt_in_mask(scene.truth[0], rng);
    CHECK(scene.truth[0].at(p.y, p.x) == 1);
  }
  CHECK_THROWS_AS(refmodel::sample_prompt_in_mask(BinaryMask(8, 8), rng), std::invalid_argument);
}

TEST_CASE("auto_masks: selection rule, dedup bound, determinism, validation") {
  const auto model = SegModel::init(5);
  const auto scene = refmodel::generate_scene(31, small_scenes());

  const auto one = refmodel::auto_masks(model, scene.image, 8, 1);
  if (!one.entries.empty()) CHECK(one.entries.size() == 1);

  const auto many = refmodel::auto_masks(model, scene.image, 8, 4);
  for (std::size_t i = 0; i < many.entries.size(); ++i) {
    CHECK(many.entries[i].area == many.entries[i].mask.area());
    CHECK(many.entries[i].mask.at(many.entries[i].id.y, many.entries[i].id.x) == 1);
    if (i > 0) CHECK(many.entries[i - 1].area >= many.entries[i].area);
    for (std::size_t j = i + 1; j < many.entries.size(); ++j)
      CHECK(metrics::iou(many.entries[i].mask, many.entries[j].mask) <= 0.9);
  }

  const auto again = refmodel::auto_masks(model, scene.image, 8, 4);
  REQUIRE(again.entries.size() == many.entries.size());
  for (std::size_t i = 0; i < many.entries.size(); ++i)
    CHECK(again.entries[i].mask.v == many.entries[i].mask.v);

  CHECK_THROWS_AS(refmodel::auto_masks(model, scene.image, 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(refmodel::auto_masks(model, scene.image, 8, 0), std::invalid_argument);
}

TEST_CASE("checkpoint: round-trip preserves parameters and predictions") {
  const auto dir = std::filesystem::temp_directory_path() / "segshield_test_ckpt";
  std::filesystem::create_directories(dir);
  const auto result = refmodel::train(tiny_train());
  const auto path = dir / "model.json";
  refmodel::save_checkpoint(path, result.model, R"({"note":"tiny"})");

  const auto loaded = refmodel::load_checkpoint(path);
  CHECK(loaded.seed() == result.model.seed());
  for (const auto& name : SegModel::param_names())
    CHECK(bitwise_equal(loaded.params().at(name), result.model.params().at(name)));

  const auto scene = refmodel::generate_scene(3, small_scenes());
  CHECK(bitwise_equal(loaded.predict(scene.image, {24, 24}), result.model.predict(scene.image, {24, 24})));

  // architecture literal is validated
  std::ifstream is(path);
  std::string sidecar((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  is.close();
  const auto pos = sidecar.find("conv3x3x16");
  REQUIRE(pos != std::string::npos);
  std::string tampered = sidecar;
  tampered.replace(pos, 10, "conv5x5x32");
  std::ofstream os(dir / "bad.json");
  os << tampered;
  os.close();
  CHECK_THROWS_WITH_AS(refmodel::load_checkpoint(dir / "bad.json"), doctest::Contains("model-mismatch"),
                       std::runtime_error);
  std::filesystem::remove_all(dir);
}
