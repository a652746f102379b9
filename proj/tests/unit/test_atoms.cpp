#include <cmath>
#include <random>

#include "doctest.h"
#include "unishear/atoms.hpp"

using namespace unishear;

TEST_CASE("meyer window plateau, support and evenness") {
  CHECK(meyer_scaling_ft(0.0) == 1.0);
  CHECK(meyer_scaling_ft(1.0 / 16.0) == 1.0);
  CHECK(meyer_scaling_ft(-1.0 / 16.0) == 1.0);
  CHECK(meyer_scaling_ft(0.2) == 0.0);
  CHECK(meyer_scaling_ft(1.0 / 8.0) == 0.0);
  const double mid = meyer_scaling_ft(3.0 / 32.0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // 3/32 is the transition midpoint, where the ramp gives nu = 1/2.
  CHECK(mid == doctest::Approx(std::cos(M_PI / 4.0)).epsilon(1e-15));
  std::mt19937 g(1);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(g);
    CHECK(meyer_scaling_ft(x) == meyer_scaling_ft(-x));
    CHECK(meyer_scaling_ft(x) >= 0.0);
    CHECK(meyer_scaling_ft(x) <= 1.0);
  }
}

TEST_CASE("smooth step endpoints and symmetry") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  for (double t = 0.0; t <= 1.0; t += 0.01) CHECK(smooth_step(t) + smooth_step(1.0 - t) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("corona examples and support") {
  CHECK(corona({0.0, 0.0}, 0) == 0.0);
  CHECK(corona({0.25, 0.0}, 0) == 1.0);
  // Outside K_j the corona vanishes exactly.
  for (int j = 0; j < 5; ++j) {
    const double inner = std::ldexp(1.0, 2 * j - 4), outer = std::ldexp(1.0, 2 * j - 1);
    CHECK(corona({0.99 * inner, 0.5 * inner}, j) == 0.0);
    CHECK(corona({1.01 * outer, 0.0}, j) == 0.0);
    CHECK(corona({0.0, 1.5 * outer}, j) == 0.0);
  }
}

TEST_CASE("calderon partition at random frequencies") {
  const int J = 5;
  std::mt19937 g(7);
  const double r = std::ldexp(1.0, 2 * J - 2);  // telescoped sum is 1 here
  std::uniform_real_distribution<double> u(-r, r);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Freq xi{u(g), u(g)};
    double s = lowpass_ft(xi) * lowpass_ft(xi);
    for (int j = 0; j <= J; ++j) s += corona(xi, j) * corona(xi, j);
    worst = std::max(worst, std::fabs(s - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("bump axioms") {
  CHECK(bump(0.0) == 1.0);
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-1.0) == 0.0);
  CHECK(bump(1.5) == 0.0);
  CHECK(bump(0.5) * bump(0.5) + bump(-0.5) * bump(-0.5) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937 g(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u(g);
    const double s = bump(x - 1) * bump(x - 1) + bump(x) * bump(x) + bump(x + 1) * bump(x + 1);
    worst = std::max(worst, std::fabs(s - 1.0));
  }
  CHECK(worst <= 1e-12);
  // Flatness at 0: finite differences up to order 4 vanish to rounding.
  const double hstep = 1e-3;
  const double d1 = (bump(hstep) - bump(-hstep)) / (2 * hstep);
  const double d2 = (bump(hstep) - 2 * bump(0) + bump(-hstep)) / (hstep * hstep);
  const double d4 = (bump(2 * hstep) - 4 * bump(hstep) + 6 * bump(0) - 4 * bump(-hstep) + bump(-2 * hstep)) /
                    std::pow(hstep, 4);
  CHECK(std::fabs(d1) < 1e-9);
  CHECK(std::fabs(d2) < 1e-5);
  CHECK(std::fabs(d4) < 5.0);
}

TEST_CASE("cone functions") {
  CHECK(cone_ft({1.0, 0.0}, Cone::horizontal) == 1.0);
  CHECK(cone_ft({0.0, 1.0}, Cone::horizontal) == 0.0);
  CHECK(cone_ft({2.0, 1.0}, Cone::horizontal) == bump(0.5));
  CHECK(cone_ft({1.0, 2.0}, Cone::vertical) == bump(0.5));
  CHECK(cone_ft({1.0, 0.0}, Cone::vertical) == 0.0);
}

TEST_CASE("cone partition with shears") {
  std::mt19937 g(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int L : {1, 2, 4, 8, 16}) {
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double x1 = 1.0 + std::fabs(u(g)), x2 = x1 * u(g);
      double s = 0.0;
      for (int l = -L; l <= L; ++l) s += std::pow(bump(L * x2 / x1 - l), 2);
      worst = std::max(worst, std::fabs(s - 1.0));
    }
    CHECK(worst <= 1e-12);
  }
}
