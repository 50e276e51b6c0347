#include "segshield/masks.hpp"

#include <cmath>
#include <stdexcept>

namespace segshield {

std::int64_t BinaryMask::area() const {
  std::int64_t n = 0;
  for (auto b : v) n += b;
  return n;
}

BinaryMask binarize(const numcore::Tensor& probs, float threshold) {
  if (probs.dims.size() != 2) throw std::invalid_argument("binarize expects an [H,W] tensor");
  BinaryMask m(probs.dims[0], probs.dims[1]);
  for (std::size_t i = 0; i < probs.data.size(); ++i) m.v[i] = probs.data[i] > threshold ? 1 : 0;
  return m;
}

Point center_point(const BinaryMask& mask) {
  double sx = 0.0, sy = 0.0;
  std::int64_t n = 0;
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      if (mask.at(y, x)) {
        sx += x;
        sy += y;
        ++n;
      }
    }
  }
  if (n == 0) throw std::invalid_argument("center_point of empty mask");
  const double cx = sx / static_cast<double>(n);
  const double cy = sy / static_cast<double>(n);
  const int rx = static_cast<int>(std::lround(cx));
  const int ry = static_cast<int>(std::lround(cy));
  if (rx >= 0 && rx < mask.w && ry >= 0 && ry < mask.h && mask.at(ry, rx)) return {rx, ry};

  Point best{0, 0};
  double best_d2 = -1.0;
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      if (!mask.at(y, x)) continue;
      const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      if (best_d2 < 0.0 || d2 < best_d2) {
        best_d2 = d2;
        best = {x, y};
      }
    }
  }
  return best;  // row-then-column tie break falls out of the scan order
}

}  // namespace segshield
