#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "unishear/fft.hpp"
#include "unishear/image.hpp"
#include "unishear/system.hpp"

namespace unishear {

// N x N periodic grid over the continuum square [-1/2, 1/2)^2. DFT index m is
// the continuum frequency m, pixel i sits at (i + 1/2)/N - 1/2.
struct FrequencyGrid {
  int N = 0;
  int J = 0;

  // Throws GridTooSmall unless N is a power of two, scales 0..J-2 lie inside
  // the Nyquist square and the inner edge of scale J-1 lies below Nyquist.
  static FrequencyGrid make(int N, int J);
  double halfwidth() const { return 0.5; }
  double pixel() const { return 1.0 / N; }
};

// Sparse band weight on the r2c half spectrum (N rows x (N/2+1) columns).
struct BandSupport {
  std::vector<std::uint32_t> index;
  std::vector<double> weight;
};

class DigitalSystem {
 public:
  // Throws GridTooSmall, TilingFailure.
  static DigitalSystem build(const ScalingSequence& seq, int N, int J);

  const FrequencyGrid& grid() const { return grid_; }
  const ScalingSequence& sequence() const { return seq_; }
  int N() const { return grid_.N; }
  // enumerate_bands order, followed by the completion band.
  const std::vector<BandDescriptor>& bands() const { return bands_; }
  std::size_t band_count() const { return bands_.size(); }
  const BandSupport& support(std::size_t b) const { return supports_[b]; }
  // Weight on the full grid at DFT index (k2, k1).
  double weight_at(std::size_t b, int k2, int k1) const;
  // Translations per unit area of the band's continuum lattice.
  double lattice_density(std::size_t b) const { return density_[b]; }
  // Per-band factor of the weighted l1 analysis norm: sqrt(density) / N^2.
  double l1_weight(std::size_t b) const { return l1w_[b]; }
  const Fft2d& fft() const { return *fft_; }

 private:
  FrequencyGrid grid_;
  ScalingSequence seq_;
  std::vector<BandDescriptor> bands_;
  std::vector<BandSupport> supports_;
  std::vector<double> density_;
  std::vector<double> l1w_;
  std::shared_ptr<Fft2d> fft_;
};

DigitalSystem build_digital_system(const ScalingSequence& seq, int N, int J);

// Full-grid coefficients, one real N x N array per band (real because the
// input is real and every band weight is even and real).
struct CoefficientSet {
  int n = 0;
  std::vector<std::vector<double>> bands;
};

CoefficientSet analyze(const Image& f, const DigitalSystem& sys);
Image synthesize(const CoefficientSet& c, const DigitalSystem& sys);

// Weighted l1 of coefficients: sum_b l1_weight(b) sum_n |c_b(n)|.
double l1_norm(const CoefficientSet& c, const DigitalSystem& sys);
double l1_analysis_norm(const Image& f, const DigitalSystem& sys);
double l2_energy(const CoefficientSet& c);

// max over grid frequencies of |sum of squared weights - 1|, optionally with
// some bands left out of the sum.
double tiling_residual(const DigitalSystem& sys, std::span<const std::size_t> excluded = {});

// Streams bands without storing the coefficient set: computes c_b = T_b x,
// hands it to `op` (which may modify it in place) and, when `out` is given,
// accumulates out = sum_b T_b^* c_b.
using BandOp = std::function<void(std::size_t band, std::span<double> coeffs)>;
void stream_bands(const Image& x, const DigitalSystem& sys, const BandOp& op, Image* out);

// Coefficients of a single band.
std::vector<double> analyze_band(const Image& f, const DigitalSystem& sys, std::size_t b);

}  // namespace unishear
