#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "unishear/image.hpp"
#include "unishear/transform.hpp"

namespace unishear {

struct WeightSpec {
  double rho = 0.125;      // support half-length
  double amplitude = 1.0;  // peak value, in (0, 1]
  std::string profile = "bump";

  void validate() const;  // throws ConfigError
};

// w(x) = amplitude * exp(1 - 1/(1 - (x/rho)^2)) on (-rho, rho), 0 outside.
double weight_profile(double x, const WeightSpec& spec);

// Fourier transform of w from samples at spacing 1/(16N); values at the
// integer frequencies -N/2..N/2 are cached.
class WeightTransform {
 public:
  WeightTransform(const WeightSpec& spec, int N);
  std::complex<double> operator()(double xi1) const;
  std::complex<double> at(int m) const { return cache_[static_cast<std::size_t>(m + n_ / 2)]; }
  int oversampling() const { return 16; }

 private:
  std::complex<double> direct(double xi1) const;
  int n_;
  double step_;
  std::vector<double> x_, w_;
  std::vector<std::complex<double>> cache_;
};

std::complex<double> weight_ft(double xi1, const WeightSpec& spec, int N);

// Slow composite Simpson evaluation of the same integral.
std::complex<double> weight_ft_quadrature(double xi1, const WeightSpec& spec, int intervals = 200000);

struct ModelInstance {
  int j = 0;
  Image image;
  double halfwidth = 0.5;
  WeightSpec weight;
  double imag_residue = 0.0;  // max |Im| of the inverse DFT
};

// f_j with spectrum w^(xi1) W_j(xi). Throws ScaleTooFine if K_j leaves the grid.
ModelInstance filtered_model(int j, int N, const WeightSpec& spec);

struct Mask {
  int n = 0;
  double h = 0.0;
  std::vector<std::uint8_t> columns;  // 1 on masked columns

  bool masked(int row, int col) const { (void)row; return columns[static_cast<std::size_t>(col)] != 0; }
  int column_count() const;
  bool empty() const { return column_count() == 0; }
  // Full N x N 0/1 indicator.
  std::vector<std::uint8_t> indicator() const;
};

// Columns whose x1 = (i + 1/2)/N - 1/2 satisfies |x1| <= h. Throws ConfigError
// unless 0 < h <= 1/2.
Mask make_mask(double h, int N);
// A mask with no missing pixels (the feasible set is a single point).
Mask empty_mask(int N);

Image project_known(const Image& f, const Mask& m);
Image project_missing(const Image& f, const Mask& m);

// max over the grid of |w^(xi1)| |Phi^2 + sum_j W_j^2 + completion^2 - 1|,
// with scale `omit` (if >= 0) left out of the sum.
double filter_recovery_check(const std::function<std::complex<double>(int)>& wft, int N, int J, int omit = -1);
double filter_recovery_check(const WeightSpec& spec, int N, int J, int omit = -1);

// Per-row max |f| and the fitted exponent p of an envelope C <2^{2j} x2>^{-p}.
struct VerticalDecay {
  std::vector<double> envelope;
  double exponent = 0.0;
};
// The fit uses rows with fit_from <= 2^{2j}|x2| and |x2| <= 1/4.
VerticalDecay vertical_decay(const ModelInstance& m, double fit_from = 16.0);

// Fraction of the image energy in rows with |x2| <= width.
double row_energy_fraction(const Image& f, double width);

}  // namespace unishear
