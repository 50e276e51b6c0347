#include "segshield/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace segshield::numcore {

std::int64_t dim_product(const std::vector<int>& dims) {
  std::int64_t n = 1;
  for (int d : dims) n *= d;
  return n;
}

std::string dims_str(const std::vector<int>& dims) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ",";
    os << dims[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<int> d, std::vector<float> v) : dims(std::move(d)), data(std::move(v)) {
  for (int dim : dims) {
    if (dim <= 0) throw std::invalid_argument("tensor dims must be positive, got " + dims_str(dims));
  }
  if (static_cast<std::int64_t>(data.size()) != dim_product(dims)) {
    throw std::invalid_argument("tensor data length " + std::to_string(data.size()) +
                                " does not match dims " + dims_str(dims));
  }
}

Tensor Tensor::zeros(std::vector<int> dims) {
  const auto n = dim_product(dims);
  return Tensor(std::move(dims), std::vector<float>(static_cast<std::size_t>(n), 0.0f));
}

Tensor Tensor::full(std::vector<int> dims, float value) {
  const auto n = dim_product(dims);
  return Tensor(std::move(dims), std::vector<float>(static_cast<std::size_t>(n), value));
}

void check_finite(const Tensor& t, const std::string& what) {
  for (float v : t.data) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite value in " + what);
  }
}

}  // namespace segshield::numcore
