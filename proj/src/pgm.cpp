#include "segshield/pgm.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace segshield {

namespace {

int read_pnm_token(std::istream& is) {
  // skips whitespace and '#' comments
  while (true) {
    int c = is.peek();
    if (c == '#') {
      std::string line;
      std::getline(is, line);
    } else if (std::isspace(c)) {
      is.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(is >> value)) throw std::runtime_error("pgm: malformed header");
  return value;
}

}  // namespace

numcore::Tensor load_pgm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("pgm: cannot open " + path.string());
  char p, five;
  is.get(p);
  is.get(five);
  if (p != 'P' || five != '5') throw std::runtime_error("pgm: not a P5 file: " + path.string());
  const int w = read_pnm_token(is);
  const int h = read_pnm_token(is);
  const int maxval = read_pnm_token(is);
  if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("pgm: unsupported header in " + path.string());
  is.get();  // single whitespace before payload
  std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!is) throw std::runtime_error("pgm: truncated payload in " + path.string());
  numcore::Tensor img = numcore::Tensor::zeros({h, w});
  for (std::size_t i = 0; i < raw.size(); ++i) img.data[i] = static_cast<float>(raw[i]);
  return img;
}

void save_pgm(const std::filesystem::path& path, const numcore::Tensor& image) {
  if (image.dims.size() != 2) throw std::invalid_argument("pgm: expected an [H,W] tensor");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("pgm: cannot open " + path.string() + " for writing");
  os << "P5\n" << image.dims[1] << " " << image.dims[0] << "\n255\n";
  std::vector<unsigned char> raw(image.data.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const float v = std::min(255.0f, std::max(0.0f, image.data[i]));
    raw[i] = static_cast<unsigned char>(std::lround(v));
  }
  os.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!os) throw std::runtime_error("pgm: write failed for " + path.string());
}

numcore::Tensor load_image(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm") return load_pgm(path);
  if (ext == ".rtn") {
    auto t = numcore::load_rtn(path);
    if (t.dims.size() != 2) throw std::runtime_error("image tensor in " + path.string() + " is not [H,W]");
    return t;
  }
  throw std::runtime_error("unsupported image extension: " + path.string());
}

}  // namespace segshield
