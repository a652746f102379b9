#include "unishear/image.hpp"

#include <algorithm>
#include <cmath>

namespace unishear {

double dot(const Image& a, const Image& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.px.size(); ++i) s += a.px[i] * b.px[i];
  return s;
}

double norm2(const Image& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Image& a) {
  double m = 0.0;
  for (double v : a.px) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace unishear
