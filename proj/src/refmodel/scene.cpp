#include "segshield/scene.hpp"

#include <stdexcept>
#include <string>

#include "segshield/rng.hpp"

namespace segshield::refmodel {

namespace {

void validate(const SceneConfig& cfg) {
  if (cfg.height < 32 || cfg.width < 32) throw std::invalid_argument("scene: image too small");
  if (cfg.min_shapes < 1 || cfg.max_shapes > 3 || cfg.min_shapes > cfg.max_shapes)
    throw std::invalid_argument("scene: shape count must be within 1..3");
  if (cfg.min_extent < 6 || cfg.max_extent > 16 || cfg.min_extent > cfg.max_extent)
    throw std::invalid_argument("scene: extent must be within [6,16]");
  if (cfg.shape_intensity_min < cfg.bg_max + 40)
    throw std::invalid_argument("scene: intensity gap between shapes and background must be >= 40");
  if (cfg.bg_min < 0 || cfg.shape_intensity_max > 255 || cfg.bg_min > cfg.bg_max ||
      cfg.shape_intensity_min > cfg.shape_intensity_max)
    throw std::invalid_argument("scene: intensity ranges invalid");
  if (cfg.min_gap < 1) throw std::invalid_argument("scene: min_gap must be >= 1");
}

// conservative clearance tests on the analytic shapes; gap > 0 implies the
// rasterized masks are disjoint
bool far_enough(const Shape& a, const Shape& b, int gap) {
  auto disk_disk = [gap](const Shape& d1, const Shape& d2) {
    const double dx = d1.cx - d2.cx, dy = d1.cy - d2.cy;
    const double need = d1.r + d2.r + gap;
    return dx * dx + dy * dy >= need * need;
  };
  auto rect_rect = [gap](const Shape& r1, const Shape& r2) {
    return std::abs(r1.cx - r2.cx) >= r1.hx + r2.hx + gap ||
           std::abs(r1.cy - r2.cy) >= r1.hy + r2.hy + gap;
  };
  auto disk_rect = [gap](const Shape& d, const Shape& r) {
    const double nx = std::max(0, std::abs(d.cx - r.cx) - r.hx);
    const double ny = std::max(0, std::abs(d.cy - r.cy) - r.hy);
    const double need = d.r + gap;
    return nx * nx + ny * ny >= need * need;
  };
  if (a.kind == ShapeKind::Disk && b.kind == ShapeKind::Disk) return disk_disk(a, b);
  if (a.kind == ShapeKind::Rectangle && b.kind == ShapeKind::Rectangle) return rect_rect(a, b);
  if (a.kind == ShapeKind::Disk) return disk_rect(a, b);
  return disk_rect(b, a);
}

BinaryMask rasterize(const Shape& s, int h, int w) {
  BinaryMask m(h, w);
  if (s.kind == ShapeKind::Disk) {
    for (int y = s.cy - s.r; y <= s.cy + s.r; ++y) {
      for (int x = s.cx - s.r; x <= s.cx + s.r; ++x) {
        const int dx = x - s.cx, dy = y - s.cy;
        if (dx * dx + dy * dy <= s.r * s.r) m.set(y, x, 1);
      }
    }
  } else {
    for (int y = s.cy - s.hy; y <= s.cy + s.hy; ++y)
      for (int x = s.cx - s.hx; x <= s.cx + s.hx; ++x) m.set(y, x, 1);
  }
  return m;
}

}  // namespace

ShapeScene generate_scene(std::uint64_t seed, const SceneConfig& cfg) {
  validate(cfg);
  Rng rng = Rng(seed).substream("scene");

  ShapeScene scene;
  scene.background = rng.uniform_int(cfg.bg_min, cfg.bg_max);
  const int n_shapes = rng.uniform_int(cfg.min_shapes, cfg.max_shapes);

  int tries = 0;
  while (static_cast<int>(scene.shapes.size()) < n_shapes) {
    if (++tries > cfg.max_tries)
      throw std::runtime_error("scene: placement failed after " + std::to_string(cfg.max_tries) +
                               " tries (seed " + std::to_string(seed) + ")");
    Shape s;
    s.kind = rng.uniform_int(0, 1) == 0 ? ShapeKind::Disk : ShapeKind::Rectangle;
    s.intensity = rng.uniform_int(cfg.shape_intensity_min, cfg.shape_intensity_max);
    if (s.kind == ShapeKind::Disk) {
      s.r = rng.uniform_int(cfg.min_extent, cfg.max_extent);
      s.cx = rng.uniform_int(s.r + 1, cfg.width - 2 - s.r);
      s.cy = rng.uniform_int(s.r + 1, cfg.height - 2 - s.r);
    } else {
      s.hx = rng.uniform_int(cfg.min_extent, cfg.max_extent);
      s.hy = rng.uniform_int(cfg.min_extent, cfg.max_extent);
      s.cx = rng.uniform_int(s.hx + 1, cfg.width - 2 - s.hx);
      s.cy = rng.uniform_int(s.hy + 1, cfg.height - 2 - s.hy);
    }
    bool ok = true;
    for (const auto& other : scene.shapes) {
      if (!far_enough(s, other, cfg.min_gap)) {
        ok = false;
        break;
      }
    }
    if (ok) scene.shapes.push_back(s);
  }

  scene.image = numcore::Tensor::full({cfg.height, cfg.width}, static_cast<float>(scene.background));
  for (const auto& s : scene.shapes) {
    BinaryMask m = rasterize(s, cfg.height, cfg.width);
    for (int y = 0; y < cfg.height; ++y)
      for (int x = 0; x < cfg.width; ++x)
        if (m.at(y, x)) scene.image.at2(y, x) = static_cast<float>(s.intensity);
    scene.truth.push_back(std::move(m));
  }
  return scene;
}

}  // namespace segshield::refmodel
