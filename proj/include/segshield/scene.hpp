#pragma once

#include <cstdint>
#include <vector>

#include "segshield/masks.hpp"
#include "segshield/tensor.hpp"

namespace segshield::refmodel {

enum class ShapeKind { Disk, Rectangle };

struct Shape {
  ShapeKind kind = ShapeKind::Disk;
  int cx = 0, cy = 0;
  int r = 0;            // disk radius
  int hx = 0, hy = 0;   // rectangle half-extents
  int intensity = 0;
};

// Defaults keep shape intensity at least 40 above any background value and a
// clear pixel gap between shapes, so a 7x7 receptive field can tell shape
// interior from background and masks never touch.
struct SceneConfig {
  int height = 64;
  int width = 64;
  int min_shapes = 1;
  int max_shapes = 3;
  int min_extent = 6;   // radius / half-extent, envelope [6,16]
  int max_extent = 10;
  int bg_min = 20;
  int bg_max = 60;
  int shape_intensity_min = 100;
  int shape_intensity_max = 255;
  int min_gap = 6;      // pixels between shape masks
  int max_tries = 1000;
};

struct ShapeScene {
  numcore::Tensor image;          // [H,W], values in [0,255]
  std::vector<Shape> shapes;
  std::vector<BinaryMask> truth;  // one binary mask per shape
  int background = 0;
};

// Deterministic for a given seed. Rejection-samples placements until all
// shapes are mutually non-overlapping (with min_gap clearance) and fully in
// bounds; exceeding cfg.max_tries placement attempts throws.
ShapeScene generate_scene(std::uint64_t seed, const SceneConfig& cfg = {});

}  // namespace segshield::refmodel
