#include <cmath>
#include <stdexcept>
#include <vector>

#include "segshield/blackbox.hpp"

namespace segshield::blackbox {

using numcore::Tensor;

namespace {

// cos(pi * (2n + 1) * k / (2N)) table, row k, column n
std::vector<double> cos_table(int n) {
  std::vector<double> table(static_cast<std::size_t>(n) * n);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      table[static_cast<std::size_t>(k) * n + i] = std::cos(pi * (2.0 * i + 1.0) * k / (2.0 * n));
  return table;
}

double scale_factor(int k, int n) { return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n); }

void require_hw(const Tensor& x) {
  if (x.dims.size() != 2) throw std::invalid_argument("dct2 expects an [H,W] tensor");
}

}  // namespace

Tensor dct2(const Tensor& x) {
  require_hw(x);
  const int h = x.dims[0], w = x.dims[1];
  const auto ch = cos_table(h);
  const auto cw = cos_table(w);

  // rows, then columns, all in double
  std::vector<double> rows(static_cast<std::size_t>(h) * w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int k = 0; k < w; ++k) {
      double acc = 0.0;
      for (int i = 0; i < w; ++i) acc += x.at2(y, i) * cw[static_cast<std::size_t>(k) * w + i];
      rows[static_cast<std::size_t>(y) * w + k] = scale_factor(k, w) * acc;
    }
  }
  Tensor out = Tensor::zeros({h, w});
  for (int x_ = 0; x_ < w; ++x_) {
    for (int k = 0; k < h; ++k) {
      double acc = 0.0;
      for (int i = 0; i < h; ++i) acc += rows[static_cast<std::size_t>(i) * w + x_] * ch[static_cast<std::size_t>(k) * h + i];
      out.at2(k, x_) = static_cast<float>(scale_factor(k, h) * acc);
    }
  }
  return out;
}

Tensor idct2(const Tensor& coeffs) {
  require_hw(coeffs);
  const int h = coeffs.dims[0], w = coeffs.dims[1];
  const auto ch = cos_table(h);
  const auto cw = cos_table(w);

  std::vector<double> cols(static_cast<std::size_t>(h) * w, 0.0);
  for (int x_ = 0; x_ < w; ++x_) {
    for (int n = 0; n < h; ++n) {
      double acc = 0.0;
      for (int k = 0; k < h; ++k)
        acc += scale_factor(k, h) * coeffs.at2(k, x_) * ch[static_cast<std::size_t>(k) * h + n];
      cols[static_cast<std::size_t>(n) * w + x_] = acc;
    }
  }
  Tensor out = Tensor::zeros({h, w});
  for (int y = 0; y < h; ++y) {
    for (int n = 0; n < w; ++n) {
      double acc = 0.0;
      for (int k = 0; k < w; ++k)
        acc += scale_factor(k, w) * cols[static_cast<std::size_t>(y) * w + k] * cw[static_cast<std::size_t>(k) * w + n];
      out.at2(y, n) = static_cast<float>(acc);
    }
  }
  return out;
}

}  // namespace segshield::blackbox
