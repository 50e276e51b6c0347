#pragma once

#include <filesystem>

#include "segshield/tensor.hpp"

namespace segshield {

// Binary PGM (P5, maxval 255). Tensors are [H,W] with values in [0,255];
// writing rounds to the nearest integer, loading yields exact integral floats.
numcore::Tensor load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const numcore::Tensor& image);

// Dispatches on extension: .pgm or .rtn.
numcore::Tensor load_image(const std::filesystem::path& path);

}  // namespace segshield
