#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unishear/image.hpp"
#include "unishear/model.hpp"
#include "unishear/transform.hpp"

namespace unishear {

// Raw image file: five text lines
//   N <int>
//   j <int>   (or "J <int>")
//   T <double>
//   rho <double>
//   h <double>
// followed by N*N little-endian IEEE-754 doubles, row-major (row = x2 index).
struct RawHeader {
  int n = 0;
  std::string scale_key = "J";  // "j" for a model instance, "J" otherwise
  int scale = 0;
  double T = 0.5;
  double rho = 0.0;
  double h = 0.0;
};

struct RawImage {
  RawHeader header;
  Image image;
};

void write_raw(const std::string& path, const Image& img, RawHeader header);
RawImage read_raw(const std::string& path);

// 8-bit binary graymap (P5, maxval 255).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> px;
};

// Min-max scaling to 0..255; a constant image maps to 0.
GrayImage to_gray(const Image& img);
void write_pgm(const std::string& path, const GrayImage& g);
GrayImage read_pgm(const std::string& path);
// Square graymap as doubles in [0, 1].
Image gray_to_image(const GrayImage& g);

// Coefficient dump:
//   "UNSH", u32 version (1), u32 N, u32 J, u32 band count,
//   per band: i32 j, i32 l, u32 orientation, then N*N (re, im) double pairs.
// All integers and doubles little-endian. Imaginary parts are written as 0.
void write_coefficients(const std::string& path, const CoefficientSet& c, const DigitalSystem& sys);
struct CoefficientFile {
  int n = 0;
  int J = 0;
  std::vector<int> band_j, band_l, band_orientation;
  CoefficientSet coefficients;
};
CoefficientFile read_coefficients(const std::string& path);

// Mask as an image: 1 on missing pixels. Reading requires constant columns.
Mask mask_from_image(const Image& img, double h);
Image mask_to_image(const Mask& m);

// Reads a raw image, or a square PGM scaled to [0, 1].
Image read_image_any(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace unishear
