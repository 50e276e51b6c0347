#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "segshield/tensor.hpp"

namespace segshield::numcore {

namespace {

constexpr char kMagic[4] = {'R', 'T', 'E', 'N'};
constexpr unsigned char kVersion = 0x01;
constexpr unsigned char kDtypeF32 = 0x00;

void put_u32_le(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("rtn: truncated stream");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_rtn(std::ostream& os, const Tensor& t) {
  if (t.dims.empty() || t.dims.size() > 255) throw std::runtime_error("rtn: unsupported ndim");
  os.write(kMagic, 4);
  os.put(static_cast<char>(kVersion));
  os.put(static_cast<char>(kDtypeF32));
  os.put(static_cast<char>(t.dims.size()));
  for (int d : t.dims) put_u32_le(os, static_cast<std::uint32_t>(d));
  for (float v : t.data) put_u32_le(os, std::bit_cast<std::uint32_t>(v));
  if (!os) throw std::runtime_error("rtn: write failed");
}

Tensor read_rtn(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("rtn: bad magic");
  const int version = is.get();
  if (version != kVersion) throw std::runtime_error("rtn: unsupported version " + std::to_string(version));
  const int dtype = is.get();
  if (dtype != kDtypeF32) throw std::runtime_error("rtn: unsupported dtype " + std::to_string(dtype));
  const int ndim = is.get();
  if (ndim <= 0 || !is) throw std::runtime_error("rtn: bad ndim");
  std::vector<int> dims(static_cast<std::size_t>(ndim));
  for (auto& d : dims) {
    const std::uint32_t v = get_u32_le(is);
    if (v == 0 || v > 1u << 24) throw std::runtime_error("rtn: bad dim " + std::to_string(v));
    d = static_cast<int>(v);
  }
  const auto n = dim_product(dims);
  std::vector<float> data(static_cast<std::size_t>(n));
  for (auto& v : data) v = std::bit_cast<float>(get_u32_le(is));
  return Tensor(std::move(dims), std::move(data));
}

void save_rtn(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("rtn: cannot open " + path.string() + " for writing");
  write_rtn(os, t);
}

Tensor load_rtn(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("rtn: cannot open " + path.string());
  return read_rtn(is);
}

}  // namespace segshield::numcore
