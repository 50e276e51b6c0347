#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "segshield/masks.hpp"
#include "segshield/metrics.hpp"
#include "segshield/rng.hpp"

using namespace segshield;
using metrics::GridOutcome;
using metrics::ScoreReport;
using numcore::Tensor;

namespace {

BinaryMask rect_mask(int h, int w, int y0, int x0, int y1, int x1) {
  BinaryMask m(h, w);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) m.set(y, x, 1);
  return m;
}

BinaryMask random_mask(int h, int w, Rng& rng, double density = 0.3) {
  BinaryMask m(h, w);
  for (auto& v : m.v) v = rng.uniform() < density ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("iou: definitions and edge conventions") {
  const BinaryMask a = rect_mask(16, 16, 2, 2, 6, 6);
  CHECK(metrics::iou(a, a) == 1.0);

  const BinaryMask b = rect_mask(16, 16, 10, 10, 14, 14);
  CHECK(metrics::iou(a, b) == 0.0);

  // a subset of b with |a|=25, |b|=100 -> 0.25
  const BinaryMask small = rect_mask(32, 32, 0, 0, 4, 4);
  const BinaryMask big = rect_mask(32, 32, 0, 0, 9, 9);
  CHECK(metrics::iou(small, big) == 0.25);

  const BinaryMask empty(16, 16);
  CHECK(metrics::iou(empty, empty) == 1.0);
  CHECK(metrics::iou(empty, a) == 0.0);
  CHECK(metrics::iou(a, empty) == 0.0);

  CHECK_THROWS_AS(metrics::iou(a, BinaryMask(8, 8)), std::invalid_argument);
}

TEST_CASE("iou is symmetric and within [0,1]") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const BinaryMask a = random_mask(12, 9, rng);
    const BinaryMask b = random_mask(12, 9, rng);
    const double ab = metrics::iou(a, b);
    CHECK(ab == metrics::iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("mse / linf / l2 definitions") {
  const Tensor x = Tensor::full({4, 8}, 7.0f);
  CHECK(metrics::mse(x, x) == 0.0);
  CHECK(metrics::linf(x, x) == 0.0);
  CHECK(metrics::l2(x, x) == 0.0);

  Tensor y = x;
  y.data[5] += 10.0f;
  CHECK(metrics::mse(x, y) == doctest::Approx(100.0 / 32.0).epsilon(1e-12));
  CHECK(metrics::linf(x, y) == 10.0);
  CHECK(metrics::l2(x, y) == 10.0);

  CHECK_THROWS_AS(metrics::mse(x, Tensor::zeros({8, 4})), std::invalid_argument);
}

TEST_CASE("distance properties: symmetry, zero-iff-equal, linf triangle inequality") {
  Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    Tensor a = Tensor::zeros({5, 6});
    Tensor b = Tensor::zeros({5, 6});
    Tensor c = Tensor::zeros({5, 6});
    for (auto& v : a.data) v = static_cast<float>(rng.uniform(0.0, 255.0));
    for (auto& v : b.data) v = static_cast<float>(rng.uniform(0.0, 255.0));
    for (auto& v : c.data) v = static_cast<float>(rng.uniform(0.0, 255.0));
    CHECK(metrics::mse(a, b) == metrics::mse(b, a));
    CHECK(metrics::l2(a, b) == metrics::l2(b, a));
    CHECK(metrics::linf(a, c) <= metrics::linf(a, b) + metrics::linf(b, c) + 1e-12);
    if (metrics::mse(a, b) == 0.0) CHECK(a.data == b.data);
  }
}

TEST_CASE("score_grid: closed-form examples") {
  GridOutcome hit;
  hit.truth[4] = true;
  hit.predicted = {4};
  auto r = metrics::score_grid({{hit}});
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.tp == 1);
  CHECK(r.tn == 8);

  GridOutcome spread;
  spread.truth[4] = true;
  spread.predicted = {1, 4, 7};
  r = metrics::score_grid({{spread}});
  CHECK(r.precision == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == doctest::Approx(0.5).epsilon(1e-12));

  GridOutcome silent;
  silent.truth[4] = true;
  r = metrics::score_grid({{silent}});
  CHECK(r.precision == 0.0);
  CHECK(r.precision_undefined);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);

  GridOutcome bad;
  bad.truth[0] = true;
  bad.predicted = {9};
  CHECK_THROWS_AS(metrics::score_grid({{bad}}), std::invalid_argument);
}

TEST_CASE("score_grid is invariant under consistent cell relabeling") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GridOutcome> grids;
    for (int g = 0; g < 10; ++g) {
      GridOutcome o;
      o.truth[static_cast<std::size_t>(rng.uniform_int(0, 8))] = true;
      for (int c = 0; c < 9; ++c)
        if (rng.uniform() < 0.3) o.predicted.insert(c);
      grids.push_back(o);
    }
    std::vector<int> perm{0, 1, 2, 3, 4, 5, 6, 7, 8};
    rng.shuffle(perm);
    std::vector<GridOutcome> relabeled;
    for (const auto& o : grids) {
      GridOutcome p;
      for (int c = 0; c < 9; ++c) {
        if (o.truth[static_cast<std::size_t>(c)]) p.truth[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])] = true;
        if (o.predicted.count(c)) p.predicted.insert(perm[static_cast<std::size_t>(c)]);
      }
      relabeled.push_back(p);
    }
    const auto a = metrics::score_grid({grids});
    const auto b = metrics::score_grid({relabeled});
    CHECK(a.precision == b.precision);
    CHECK(a.recall == b.recall);
    CHECK(a.f1 == b.f1);
  }
}

TEST_CASE("uniform random predictor converges to precision 1/9") {
  Rng rng(8);
  std::vector<GridOutcome> grids;
  for (int g = 0; g < 10000; ++g) {
    GridOutcome o;
    o.truth[static_cast<std::size_t>(rng.uniform_int(0, 8))] = true;
    o.predicted = {rng.uniform_int(0, 8)};
    grids.push_back(o);
  }
  const auto r = metrics::score_grid({grids});
  CHECK(r.precision == doctest::Approx(1.0 / 9.0).epsilon(0.18));  // +-0.02 absolute
  CHECK(std::abs(r.precision - 1.0 / 9.0) < 0.02);
}

TEST_CASE("mean_iou over mask sets: unmatched ids contribute zero") {
  MaskSet ref;
  const BinaryMask m1 = rect_mask(16, 16, 1, 1, 4, 4);
  const BinaryMask m2 = rect_mask(16, 16, 9, 9, 12, 12);
  ref.entries.push_back({{2, 2}, m1, m1.area()});
  ref.entries.push_back({{10, 10}, m2, m2.area()});

  MaskSet other;
  other.entries.push_back({{2, 2}, m1, m1.area()});  // id {10,10} missing
  CHECK(metrics::mean_iou(ref, other) == 0.5);

  other.entries.push_back({{10, 10}, m2, m2.area()});
  CHECK(metrics::mean_iou(ref, other) == 1.0);
  CHECK(metrics::mean_iou(MaskSet{}, other) == 0.0);
}

TEST_CASE("center_point: centroid, single pixel, ring fallback") {
  // filled 3x3 square at rows/cols 10..12 -> (11,11)
  const BinaryMask square = rect_mask(20, 20, 10, 10, 12, 12);
  CHECK(center_point(square) == Point{11, 11});

  BinaryMask single(10, 10);
  single.set(7, 5, 1);  // (x=5, y=7)
  CHECK(center_point(single) == Point{5, 7});

  // ring: centroid falls in the hole, fallback picks the nearest ring pixel
  BinaryMask ring(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      const double d = std::sqrt((x - 16.0) * (x - 16.0) + (y - 16.0) * (y - 16.0));
      if (d >= 6.0 && d <= 9.0) ring.set(y, x, 1);
    }
  const Point c = center_point(ring);
  CHECK(ring.at(c.y, c.x) == 1);
  const double d = std::sqrt((c.x - 16.0) * (c.x - 16.0) + (c.y - 16.0) * (c.y - 16.0));
  CHECK(d <= 6.5);  // innermost ring layer

  CHECK_THROWS_AS(center_point(BinaryMask(4, 4)), std::invalid_argument);
}

TEST_CASE("center_point always lands inside the mask") {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    BinaryMask m = random_mask(15, 11, rng, 0.15);
    if (m.empty()) m.set(rng.uniform_int(0, 14), rng.uniform_int(0, 10), 1);
    const Point c = center_point(m);
    CHECK(m.at(c.y, c.x) == 1);
  }
}

TEST_CASE("binarize uses a strict threshold") {
  Tensor probs = Tensor::zeros({1, 3});
  probs.data = {0.5f, 0.50001f, 0.49999f};
  const BinaryMask m = binarize(probs);
  CHECK(m.v == std::vector<std::uint8_t>{0, 1, 0});
}
