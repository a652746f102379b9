#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unishear/atoms.hpp"

namespace unishear {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);  // normalizes sign and gcd
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// Accepts "p/q", plain integers and finite decimals ("0.3" -> 3/10).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

class ScalingSequence {
 public:
  // Throws WrongAnchor or NotAdmissible(j) for the first bad entry.
  static ScalingSequence validated(std::vector<Rational> values);

  int scales() const { return static_cast<int>(values_.size()); }
  const Rational& alpha(int j) const { return values_.at(j); }
  // m = alpha_j * j, an integer by admissibility.
  int alpha_times_j(int j) const;
  // (2 - alpha_j) j, the log2 of the shear bound.
  int shear_exponent(int j) const { return 2 * j - alpha_times_j(j); }
  std::int64_t shear_bound(int j) const;
  const std::vector<Rational>& values() const { return values_; }

 private:
  std::vector<Rational> values_;
};

ScalingSequence validate_scaling_sequence(std::vector<Rational> values);
ScalingSequence preset_alpha(double alpha, int J);
ScalingSequence preset_wavelet(int J);
// "alpha:<real>", "wavelet", "parabolic", or "seq:<r0>,<r1>,..." (rationals).
ScalingSequence parse_preset(std::string_view spec, int J);

enum class Orientation { coarse, horizontal, vertical, boundary, completion };
const char* orientation_name(Orientation o);

struct ShearletIndex {
  int j = -1;
  int l = 0;
  std::int64_t k[2] = {0, 0};
  Orientation iota = Orientation::coarse;
  Rational alpha;
};

struct BandDescriptor {
  int j = -1;
  int l = 0;
  Orientation iota = Orientation::coarse;
  Rational alpha;
  std::int64_t shear_bound = 1;  // L = 2^{(2-alpha_j) j}
  double normalization = 1.0;    // 2^{-(2+alpha_j) j / 2}
};

// Coarse band first, then j ascending; within a scale h, v, boundary; l ascending.
std::vector<BandDescriptor> enumerate_bands(const ScalingSequence& seq);

// Band count predicted by the admissible shear ranges.
std::size_t expected_band_count(const ScalingSequence& seq);

// Unnormalized band weight B_b(xi) (coarse: Phi^). Real, >= 0.
double band_weight(const BandDescriptor& band, Freq xi);

// The two halves of a boundary weight, each extended smoothly across the seam.
double boundary_horizontal_formula(const BandDescriptor& band, Freq xi);
double boundary_vertical_formula(const BandDescriptor& band, Freq xi);

// Extra factor applied to the lattice-mode atom beyond the normalization;
// 1/2 for boundary bands with j >= 1 (half-integer lattice), else 1.
double lattice_factor(const BandDescriptor& band);

// Modulus of the continuum atom's Fourier transform at translation 0.
double atom_ft(const BandDescriptor& band, Freq xi);

std::string band_listing_line(const BandDescriptor& band);

}  // namespace unishear
