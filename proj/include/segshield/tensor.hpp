#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace segshield::numcore {

// Dense row-major f32 tensor. Dims are positive; data length equals the dim
// product. Public operations leave only finite values behind.
struct Tensor {
  std::vector<int> dims;
  std::vector<float> data;

  Tensor() = default;
  Tensor(std::vector<int> d, std::vector<float> v);

  static Tensor zeros(std::vector<int> dims);
  static Tensor full(std::vector<int> dims, float value);
  static Tensor scalar(float value) { return Tensor({1}, {value}); }

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
  bool same_dims(const Tensor& other) const { return dims == other.dims; }

  // [C,H,W] / [H,W] accessors used throughout the image code paths
  float& at(int i) { return data[static_cast<std::size_t>(i)]; }
  float at(int i) const { return data[static_cast<std::size_t>(i)]; }
  float& at2(int y, int x) { return data[static_cast<std::size_t>(y) * dims[1] + x]; }
  float at2(int y, int x) const { return data[static_cast<std::size_t>(y) * dims[1] + x]; }
};

std::int64_t dim_product(const std::vector<int>& dims);
std::string dims_str(const std::vector<int>& dims);

// throws std::runtime_error naming `what` if any entry is NaN/Inf
void check_finite(const Tensor& t, const std::string& what);

// ---- .rtn serialization ------------------------------------------------
// magic "RTEN", version 0x01, dtype 0x00 (f32), ndim u8, ndim x u32 LE dims,
// row-major f32 LE payload. Round-trips are bit-exact.

void write_rtn(std::ostream& os, const Tensor& t);
Tensor read_rtn(std::istream& is);

void save_rtn(const std::filesystem::path& path, const Tensor& t);
Tensor load_rtn(const std::filesystem::path& path);

}  // namespace segshield::numcore
