#pragma once

#include <cstdint>
#include <vector>

#include "segshield/tensor.hpp"

namespace segshield {

struct Point {
  int x = 0;  // column
  int y = 0;  // row
  bool operator==(const Point&) const = default;
};

struct BinaryMask {
  int h = 0;
  int w = 0;
  std::vector<std::uint8_t> v;  // row-major {0,1}

  BinaryMask() = default;
  BinaryMask(int h_, int w_) : h(h_), w(w_), v(static_cast<std::size_t>(h_) * w_, 0) {}

  std::uint8_t at(int y, int x) const { return v[static_cast<std::size_t>(y) * w + x]; }
  void set(int y, int x, std::uint8_t val) { v[static_cast<std::size_t>(y) * w + x] = val; }
  std::int64_t area() const;
  bool empty() const { return area() == 0; }
};

// probs > threshold (strict)
BinaryMask binarize(const numcore::Tensor& probs, float threshold = 0.5f);

// Centroid of mask pixels rounded to nearest integer; when the rounded point
// falls outside the mask (ring-shaped masks), the mask pixel nearest to the
// centroid wins, ties broken by ascending row then column. Throws on empty
// masks. The returned point is always inside the mask.
Point center_point(const BinaryMask& mask);

// Masks keyed by their center points, sorted by descending area.
struct MaskEntry {
  Point id;
  BinaryMask mask;
  std::int64_t area = 0;
};

struct MaskSet {
  std::vector<MaskEntry> entries;
  bool shortfall = false;  // fewer distinct masks than requested

  const MaskEntry* find(Point id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

}  // namespace segshield
