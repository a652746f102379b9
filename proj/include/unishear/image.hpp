#pragma once

#include <cstdint>
#include <vector>

namespace unishear {

// Square real image, row-major; rows follow x2, columns follow x1.
struct Image {
  int n = 0;
  std::vector<double> px;

  Image() = default;
  explicit Image(int size, double fill = 0.0) : n(size), px(static_cast<std::size_t>(size) * size, fill) {}

  double& operator()(int row, int col) { return px[static_cast<std::size_t>(row) * n + col]; }
  double operator()(int row, int col) const { return px[static_cast<std::size_t>(row) * n + col]; }
};

// Continuum coordinate of pixel index i on an N grid: (i + 1/2)/N - 1/2.
inline double pixel_coordinate(int i, int n) { return (i + 0.5) / n - 0.5; }

// Integer DFT index to signed frequency in [-N/2, N/2).
inline int signed_frequency(int k, int n) { return k < n / 2 ? k : k - n; }

double dot(const Image& a, const Image& b);
double norm2(const Image& a);
double max_abs(const Image& a);

}  // namespace unishear
