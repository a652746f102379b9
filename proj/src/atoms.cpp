#include "unishear/atoms.hpp"

#include <cmath>
#include <numbers>

namespace unishear {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * t * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double meyer_scaling_ft(double u) {
  const double a = std::fabs(u);
  if (a <= WindowProfile::plateau_radius) return 1.0;
  if (a >= WindowProfile::support_radius) return 0.0;
  return std::cos(std::numbers::pi / 2.0 * smooth_step(16.0 * a - 1.0));
}

double lowpass_ft(Freq xi) { return meyer_scaling_ft(xi[0]) * meyer_scaling_ft(xi[1]); }

double corona(Freq xi, int j) {
  const double s = std::ldexp(1.0, -2 * j);
  const Freq y{xi[0] * s, xi[1] * s};
  const double outer = lowpass_ft({y[0] / 4.0, y[1] / 4.0});
  const double inner = lowpass_ft(y);
  const double r = outer * outer - inner * inner;
  if (r <= 0.0) return 0.0;  // negatives are cancellation noise below kRadicandClamp
  return std::sqrt(r);
}

double bump(double u) {
  const double a = std::fabs(u);
  if (a >= 1.0) return 0.0;
  return std::cos(std::numbers::pi / 2.0 * smooth_step(a));
}

double cone_ft(Freq xi, Cone c) {
  if (c == Cone::horizontal) return xi[0] == 0.0 ? 0.0 : bump(xi[1] / xi[0]);
  return xi[1] == 0.0 ? 0.0 : bump(xi[0] / xi[1]);
}

}  // namespace unishear
