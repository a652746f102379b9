#include "unishear/transform.hpp"

#include <algorithm>
#include <cmath>

#include "unishear/errors.hpp"

namespace unishear {

FrequencyGrid FrequencyGrid::make(int N, int J) {
  if (N < 4 || (N & (N - 1)) != 0 || J < 1) throw GridTooSmall(J, N);
  const double nyquist = N / 2.0;
  if (J >= 2 && std::ldexp(1.0, 2 * (J - 2) - 1) > nyquist) throw GridTooSmall(J, N);
  if (std::ldexp(1.0, 2 * (J - 1) - 4) >= nyquist) throw GridTooSmall(J, N);
  return FrequencyGrid{N, J};
}

DigitalSystem DigitalSystem::build(const ScalingSequence& seq, int N, int J) {
  if (seq.scales() != J) throw ConfigError("sequence has " + std::to_string(seq.scales()) + " scales, J=" + std::to_string(J));
  DigitalSystem s;
  s.grid_ = FrequencyGrid::make(N, J);
  s.seq_ = seq;
  s.bands_ = enumerate_bands(seq);
  const std::size_t nb = s.bands_.size();
  s.supports_.resize(nb + 1);

  const int hc = N / 2 + 1;
  const int nyq = -N / 2;
  std::vector<double> sum(static_cast<std::size_t>(N) * hc, 0.0);

  // Band offsets per scale in enumerate_bands order.
  std::vector<std::size_t> offset(J, 0);
  for (std::size_t b = nb; b-- > 1;) offset[s.bands_[b].j] = b;

  auto push = [&](std::size_t b, std::uint32_t idx, double w) {
    if (w <= 0.0) return;
    s.supports_[b].index.push_back(idx);
    s.supports_[b].weight.push_back(w);
    sum[idx] += w * w;
  };

  for (int k2 = 0; k2 < N; ++k2) {
    const int m2 = signed_frequency(k2, N);
    for (int k1 = 0; k1 < hc; ++k1) {
      const int m1 = k1 == N / 2 ? nyq : k1;
      const auto idx = static_cast<std::uint32_t>(k2 * hc + k1);
      const Freq xi{static_cast<double>(m1), static_cast<double>(m2)};
      push(0, idx, band_weight(s.bands_[0], xi));
      if (m1 == nyq || m2 == nyq) continue;  // Nyquist lines go to the completion band
      for (int j = 0; j < J; ++j) {
        if (corona(xi, j) == 0.0) continue;
        const std::int64_t L = seq.shear_bound(j);
        const bool hcone = std::abs(m2) <= std::abs(m1);
        const std::size_t base = offset[j];
        const std::size_t nint = static_cast<std::size_t>(2 * L - 1);
        auto candidates = [&](double num, double den, bool h) {
          if (den == 0.0) return;
          const double u = static_cast<double>(L) * num / den;
          const auto l0 = static_cast<std::int64_t>(std::floor(u));
          for (std::int64_t l = l0; l <= l0 + 1; ++l) {
            std::size_t b;
            if (std::abs(l) < L) {
              b = base + (h ? 0 : nint) + static_cast<std::size_t>(l + L - 1);
            } else if (std::abs(l) == L && hcone == h) {
              b = base + 2 * nint + (l > 0 ? 1 : 0);
            } else {
              continue;
            }
            push(b, idx, band_weight(s.bands_[b], xi));
          }
        };
        candidates(m2, m1, true);
        candidates(m1, m2, false);
      }
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double c = 1.0 - sum[i];
    if (c > 0.0) {
      s.supports_[nb].index.push_back(static_cast<std::uint32_t>(i));
      s.supports_[nb].weight.push_back(std::sqrt(c));
    }
  }

  BandDescriptor completion;
  completion.j = J;
  completion.iota = Orientation::completion;
  completion.normalization = 1.0 / N;
  s.bands_.push_back(completion);

  s.density_.resize(nb + 1);
  s.l1w_.resize(nb + 1);
  const double n2 = static_cast<double>(N) * N;
  for (std::size_t b = 0; b <= nb; ++b) {
    const BandDescriptor& d = s.bands_[b];
    const double nl = d.normalization * (b == nb ? 1.0 : lattice_factor(d));
    s.density_[b] = 1.0 / (nl * nl);
    s.l1w_[b] = 1.0 / (nl * n2);
  }
  s.fft_ = std::make_shared<Fft2d>(N);

  const double r = tiling_residual(s);
  if (r > 1e-8) throw TilingFailure(r);
  return s;
}

DigitalSystem build_digital_system(const ScalingSequence& seq, int N, int J) { return DigitalSystem::build(seq, N, J); }

double DigitalSystem::weight_at(std::size_t b, int k2, int k1) const {
  const int N = grid_.N;
  if (k1 > N / 2) {
    k1 = N - k1;
    k2 = (N - k2) % N;
  }
  const auto idx = static_cast<std::uint32_t>(k2 * (N / 2 + 1) + k1);
  const BandSupport& s = supports_[b];
  auto it = std::lower_bound(s.index.begin(), s.index.end(), idx);
  if (it == s.index.end() || *it != idx) return 0.0;
  return s.weight[static_cast<std::size_t>(it - s.index.begin())];
}

double tiling_residual(const DigitalSystem& sys, std::span<const std::size_t> excluded) {
  const std::size_t h = sys.fft().half_size();
  std::vector<double> sum(h, 0.0);
  for (std::size_t b = 0; b < sys.band_count(); ++b) {
    if (std::find(excluded.begin(), excluded.end(), b) != excluded.end()) continue;
    const BandSupport& s = sys.support(b);
    for (std::size_t i = 0; i < s.index.size(); ++i) sum[s.index[i]] += s.weight[i] * s.weight[i];
  }
  double r = 0.0;
  for (double v : sum) r = std::max(r, std::fabs(v - 1.0));
  return r;
}

namespace {

void check_size(const Image& f, const DigitalSystem& sys) {
  if (f.n != sys.N() || f.px.size() != static_cast<std::size_t>(f.n) * f.n)
    throw DimensionMismatch("image size " + std::to_string(f.n) + " does not match grid N=" + std::to_string(sys.N()));
}

struct Scratch {
  AlignedBuffer<double> coeffs;
  AlignedBuffer<cplx> spec, tmp, acc;
  explicit Scratch(const Fft2d& fft)
      : coeffs(fft.full_size()), spec(fft.half_size()), tmp(fft.half_size()), acc(fft.half_size()) {}
};

void load_spectrum(const Image& x, const DigitalSystem& sys, Scratch& s) {
  std::copy(x.px.begin(), x.px.end(), s.coeffs.data());
  sys.fft().r2c(s.coeffs.data(), s.spec.data());
}

// Leaves band b's coefficients in s.coeffs.
void band_from_spectrum(const DigitalSystem& sys, Scratch& s, std::size_t b) {
  const BandSupport& sup = sys.support(b);
  const double scale = 1.0 / static_cast<double>(sys.fft().full_size());
  s.tmp.zero();
  for (std::size_t i = 0; i < sup.index.size(); ++i) s.tmp[sup.index[i]] = s.spec[sup.index[i]] * (sup.weight[i] * scale);
  sys.fft().c2r(s.tmp.data(), s.coeffs.data());
}

// Adds T_b^* of s.coeffs to the accumulated half spectrum.
void accumulate_band(const DigitalSystem& sys, Scratch& s, std::size_t b) {
  sys.fft().r2c(s.coeffs.data(), s.tmp.data());
  const BandSupport& sup = sys.support(b);
  for (std::size_t i = 0; i < sup.index.size(); ++i) s.acc[sup.index[i]] += s.tmp[sup.index[i]] * sup.weight[i];
}

void finish_synthesis(const DigitalSystem& sys, Scratch& s, Image& out) {
  sys.fft().c2r(s.acc.data(), s.coeffs.data());
  const double scale = 1.0 / static_cast<double>(sys.fft().full_size());
  out = Image(sys.N());
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) out.px[i] = s.coeffs[i] * scale;
}

}  // namespace

std::vector<double> analyze_band(const Image& f, const DigitalSystem& sys, std::size_t b) {
  check_size(f, sys);
  Scratch s(sys.fft());
  load_spectrum(f, sys, s);
  band_from_spectrum(sys, s, b);
  return std::vector<double>(s.coeffs.data(), s.coeffs.data() + s.coeffs.size());
}

CoefficientSet analyze(const Image& f, const DigitalSystem& sys) {
  CoefficientSet c;
  c.n = sys.N();
  c.bands.resize(sys.band_count());
  stream_bands(
      f, sys, [&](std::size_t b, std::span<double> v) { c.bands[b].assign(v.begin(), v.end()); }, nullptr);
  return c;
}

void stream_bands(const Image& x, const DigitalSystem& sys, const BandOp& op, Image* out) {
  check_size(x, sys);
  Scratch s(sys.fft());
  load_spectrum(x, sys, s);
  for (std::size_t b = 0; b < sys.band_count(); ++b) {
    band_from_spectrum(sys, s, b);
    op(b, std::span<double>(s.coeffs.data(), s.coeffs.size()));
    if (out) accumulate_band(sys, s, b);
  }
  if (out) finish_synthesis(sys, s, *out);
}

Image synthesize(const CoefficientSet& c, const DigitalSystem& sys) {
  if (c.n != sys.N() || c.bands.size() != sys.band_count())
    throw DimensionMismatch("coefficient set does not match the system");
  Scratch s(sys.fft());
  for (std::size_t b = 0; b < c.bands.size(); ++b) {
    if (c.bands[b].size() != s.coeffs.size()) throw DimensionMismatch("band array has wrong size");
    std::copy(c.bands[b].begin(), c.bands[b].end(), s.coeffs.data());
    accumulate_band(sys, s, b);
  }
  Image out;
  finish_synthesis(sys, s, out);
  return out;
}

double l1_norm(const CoefficientSet& c, const DigitalSystem& sys) {
  double total = 0.0;
  for (std::size_t b = 0; b < c.bands.size(); ++b) {
    double t = 0.0;
    for (double v : c.bands[b]) t += std::fabs(v);
    total += sys.l1_weight(b) * t;
  }
  return total;
}

double l1_analysis_norm(const Image& f, const DigitalSystem& sys) {
  double total = 0.0;
  stream_bands(
      f, sys,
      [&](std::size_t b, std::span<double> v) {
        double t = 0.0;
        for (double x : v) t += std::fabs(x);
        total += sys.l1_weight(b) * t;
      },
      nullptr);
  return total;
}

double l2_energy(const CoefficientSet& c) {
  double e = 0.0;
  for (const auto& band : c.bands)
    for (double v : band) e += v * v;
  return e;
}

}  // namespace unishear
