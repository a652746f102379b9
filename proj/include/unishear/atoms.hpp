#pragma once

#include <array>

namespace unishear {

using Freq = std::array<double, 2>;

enum class Cone { horizontal, vertical };

// Fixed window geometry. The ramp is nu(t) = t^4 (35 - 84t + 70t^2 - 20t^3).
struct WindowProfile {
  static constexpr double plateau_radius = 1.0 / 16.0;
  static constexpr double support_radius = 1.0 / 8.0;
};

// Clamp applied to the corona radicand before the square root.
inline constexpr double kRadicandClamp = 1e-14;

// Smooth step on [0,1], flat to third order at both ends, nu(t) + nu(1-t) = 1.
double smooth_step(double t);

double meyer_scaling_ft(double u);

// Tensor lowpass Phi^(xi) = phi^(xi1) phi^(xi2).
double lowpass_ft(Freq xi);

// W_j(xi) = W(2^{-2j} xi), W^2 = Phi^2(xi/4) - Phi^2(xi).
double corona(Freq xi, int j);

// v(u) = cos(pi/2 nu(|u|)) on [-1,1]; satisfies sum_l v(u-l)^2 = 1.
double bump(double u);

double cone_ft(Freq xi, Cone c);

}  // namespace unishear
