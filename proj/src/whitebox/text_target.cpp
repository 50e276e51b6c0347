#include <map>
#include <stdexcept>

#include "segshield/whitebox.hpp"

namespace segshield::whitebox {

namespace {

// classic 5x7 dot-matrix glyphs, bit 4 = leftmost column
const std::map<char, std::array<std::uint8_t, 7>> kFont = {
    {'A', {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'B', {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110}},
    {'C', {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110}},
    {'D', {0b11110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b11110}},
    {'E', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111}},
    {'F', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'G', {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01110}},
    {'H', {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'I', {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'J', {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100}},
    {'K', {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001}},
    {'L', {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111}},
    {'M', {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001}},
    {'N', {0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001}},
    {'O', {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'P', {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'Q', {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101}},
    {'R', {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001}},
    {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
    {'T', {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'U', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'V', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100}},
    {'W', {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010}},
    {'X', {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001}},
    {'Y', {0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'Z', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111}},
    {'0', {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110}},
    {'1', {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'2', {0b01110, 0b10001, 0b00001, 0b00110, 0b01000, 0b10000, 0b11111}},
    {'3', {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110}},
    {'4', {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010}},
    {'5', {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110}},
    {'6', {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110}},
    {'7', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000}},
    {'8', {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110}},
    {'9', {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100}},
    {' ', {0, 0, 0, 0, 0, 0, 0}},
};

constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr int kSpacing = 1;

}  // namespace

const std::array<std::uint8_t, 7>& glyph_rows(char c) {
  auto it = kFont.find(c);
  if (it == kFont.end()) throw std::invalid_argument(std::string("no glyph for '") + c + "' (A-Z, 0-9, space)");
  return it->second;
}

BinaryMask text_target(const std::string& text, int h, int w, int scale) {
  if (h < 1 || w < 1) throw std::invalid_argument("text_target: bad mask dims");
  BinaryMask mask(h, w);
  if (text.empty()) return mask;
  for (char c : text) glyph_rows(c);  // validates the alphabet

  const int n = static_cast<int>(text.size());
  const int text_w = n * kGlyphW + (n - 1) * kSpacing;
  if (scale == 0) {
    scale = std::min(w / text_w, h / kGlyphH);
    if (scale < 1)
      throw std::invalid_argument("text '" + text + "' does not fit " + std::to_string(h) + "x" +
                                  std::to_string(w) + " at scale >= 1");
  } else if (scale < 0 || text_w * scale > w || kGlyphH * scale > h) {
    throw std::invalid_argument("text '" + text + "' does not fit at scale " + std::to_string(scale));
  }

  const int x0 = (w - text_w * scale) / 2;
  const int y0 = (h - kGlyphH * scale) / 2;
  for (int i = 0; i < n; ++i) {
    const auto& rows = glyph_rows(text[static_cast<std::size_t>(i)]);
    const int gx = x0 + i * (kGlyphW + kSpacing) * scale;
    for (int ry = 0; ry < kGlyphH; ++ry) {
      for (int rx = 0; rx < kGlyphW; ++rx) {
        if (!(rows[static_cast<std::size_t>(ry)] >> (kGlyphW - 1 - rx) & 1)) continue;
        for (int sy = 0; sy < scale; ++sy)
          for (int sx = 0; sx < scale; ++sx)
            mask.set(y0 + ry * scale + sy, gx + rx * scale + sx, 1);
      }
    }
  }
  return mask;
}

}  // namespace segshield::whitebox
