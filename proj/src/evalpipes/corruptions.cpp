#include <cmath>
#include <stdexcept>

#include "segshield/evalpipes.hpp"
#include "segshield/rng.hpp"

namespace segshield::evalpipes {

using numcore::Tensor;

const char* corruption_name(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::Night: return "night";
    case CorruptionKind::Snow: return "snow";
    case CorruptionKind::Wet: return "wet";
    case CorruptionKind::Drops: return "drops";
    case CorruptionKind::Identity: return "identity";
    case CorruptionKind::Blank: return "blank";
  }
  return "?";
}

CorruptionKind parse_corruption(const std::string& name) {
  if (name == "night") return CorruptionKind::Night;
  if (name == "snow") return CorruptionKind::Snow;
  if (name == "wet") return CorruptionKind::Wet;
  if (name == "drops") return CorruptionKind::Drops;
  if (name == "identity") return CorruptionKind::Identity;
  if (name == "blank") return CorruptionKind::Blank;
  throw std::invalid_argument("unknown corruption kind '" + name + "'");
}

namespace {

float clamp255(double v) { return static_cast<float>(std::min(255.0, std::max(0.0, v))); }

Tensor box_blur5(const Tensor& image) {
  const int h = image.dims[0], w = image.dims[1];
  Tensor out = Tensor::zeros(image.dims);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      int count = 0;
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
          acc += image.at2(yy, xx);
          ++count;
        }
      }
      out.at2(y, x) = static_cast<float>(acc / count);
    }
  }
  return out;
}

}  // namespace

Tensor corrupt(const Tensor& image, const CorruptionSpec& spec) {
  if (image.dims.size() != 2) throw std::invalid_argument("corrupt expects an [H,W] image");
  if (spec.strength < 0.0 || spec.strength > 1.0)
    throw std::invalid_argument("corruption strength must be in [0,1]");
  const int h = image.dims[0], w = image.dims[1];

  switch (spec.kind) {
    case CorruptionKind::Identity:
      return image;
    case CorruptionKind::Blank:
      return Tensor::zeros(image.dims);
    case CorruptionKind::Night: {
      Tensor out = image;
      const double factor = 1.0 - 0.7 * spec.strength;
      for (auto& v : out.data) v = clamp255(v * factor);
      return out;
    }
    case CorruptionKind::Wet: {
      double mean = 0.0;
      for (float v : image.data) mean += v;
      mean /= static_cast<double>(image.data.size());
      const double factor = 1.0 - 0.5 * spec.strength;
      Tensor out = image;
      for (auto& v : out.data) v = clamp255(mean + (v - mean) * factor);
      return out;
    }
    case CorruptionKind::Snow: {
      Tensor out = image;
      const auto target = static_cast<std::int64_t>(0.2 * spec.strength * h * w);
      if (target == 0) return out;
      Rng rng = Rng(spec.seed).substream("snow");
      BinaryMask covered(h, w);
      std::int64_t coverage = 0;
      int tries = 0;
      while (coverage < target && ++tries < 10000) {
        const int r = rng.uniform_int(2, 5);
        const int cx = rng.uniform_int(0, w - 1);
        const int cy = rng.uniform_int(0, h - 1);
        for (int y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y) {
          for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x) {
            const int dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r && !covered.at(y, x)) {
              covered.set(y, x, 1);
              ++coverage;
            }
          }
        }
      }
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (covered.at(y, x)) out.at2(y, x) = clamp255(out.at2(y, x) + (255.0 - out.at2(y, x)) * 0.85);
      return out;
    }
    case CorruptionKind::Drops: {
      const int count = static_cast<int>(std::lround(spec.strength * 20.0));
      Tensor out = image;
      if (count == 0) return out;
      const Tensor blurred = box_blur5(image);
      Rng rng = Rng(spec.seed).substream("drops");
      for (int i = 0; i < count; ++i) {
        const int r = rng.uniform_int(3, 6);
        const int cx = rng.uniform_int(0, w - 1);
        const int cy = rng.uniform_int(0, h - 1);
        for (int y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y) {
          for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x) {
            const int dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) out.at2(y, x) = blurred.at2(y, x);
          }
        }
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown corruption kind");
}

}  // namespace segshield::evalpipes
