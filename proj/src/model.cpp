#include "unishear/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unishear/errors.hpp"

namespace unishear {

void WeightSpec::validate() const {
  if (!(rho > 0.0 && rho <= 0.5)) throw ConfigError("weight rho must lie in (0, 1/2]");
  if (!(amplitude > 0.0 && amplitude <= 1.0)) throw ConfigError("weight amplitude must lie in (0, 1]");
  if (profile != "bump") throw ConfigError("unknown weight profile '" + profile + "'");
}

double weight_profile(double x, const WeightSpec& spec) {
  const double t = x / spec.rho;
  if (std::fabs(t) >= 1.0) return 0.0;
  return spec.amplitude * std::exp(1.0 - 1.0 / (1.0 - t * t));
}

WeightTransform::WeightTransform(const WeightSpec& spec, int N) : n_(N), step_(1.0 / (16.0 * N)) {
  spec.validate();
  const int K = static_cast<int>(std::ceil(spec.rho / step_));
  for (int k = -K; k <= K; ++k) {
    const double x = k * step_;
    const double w = weight_profile(x, spec);
    if (w > 0.0) {
      x_.push_back(x);
      w_.push_back(w);
    }
  }
  cache_.resize(static_cast<std::size_t>(N) + 1);
  for (int m = -N / 2; m <= N / 2; ++m) cache_[static_cast<std::size_t>(m + N / 2)] = direct(m);
}

std::complex<double> WeightTransform::direct(double xi1) const {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double a = -2.0 * std::numbers::pi * xi1 * x_[i];
    re += w_[i] * std::cos(a);
    im += w_[i] * std::sin(a);
  }
  return {re * step_, im * step_};
}

std::complex<double> WeightTransform::operator()(double xi1) const {
  const double r = std::round(xi1);
  if (r == xi1 && std::fabs(r) <= n_ / 2) return at(static_cast<int>(r));
  return direct(xi1);
}

std::complex<double> weight_ft(double xi1, const WeightSpec& spec, int N) { return WeightTransform(spec, N)(xi1); }

std::complex<double> weight_ft_quadrature(double xi1, const WeightSpec& spec, int intervals) {
  const int n = intervals + intervals % 2;
  const double a = -spec.rho, h = 2.0 * spec.rho / n;
  double re = 0.0, im = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + i * h;
    const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double w = weight_profile(x, spec);
    const double ph = -2.0 * std::numbers::pi * xi1 * x;
    re += c * w * std::cos(ph);
    im += c * w * std::sin(ph);
  }
  return {re * h / 3.0, im * h / 3.0};
}

ModelInstance filtered_model(int j, int N, const WeightSpec& spec) {
  if (j < 0 || std::ldexp(1.0, 2 * j - 1) > N / 2.0) throw ScaleTooFine(j, N);
  const WeightTransform wt(spec, N);
  Fft2d fft(N);
  AlignedBuffer<cplx> spec_buf(fft.full_size()), img(fft.full_size());
  for (int k2 = 0; k2 < N; ++k2) {
    const int m2 = signed_frequency(k2, N);
    for (int k1 = 0; k1 < N; ++k1) {
      const int m1 = signed_frequency(k1, N);
      if (m1 == -N / 2 || m2 == -N / 2) continue;
      const double c = corona({static_cast<double>(m1), static_cast<double>(m2)}, j);
      if (c == 0.0) continue;
      // Phase places pixel i at continuum (i + 1/2 - N/2)/N.
      const double ph = std::numbers::pi * (1.0 - N) * (m1 + m2) / N;
      spec_buf[static_cast<std::size_t>(k2) * N + k1] = wt.at(m1) * c * cplx(std::cos(ph), std::sin(ph));
    }
  }
  fft.c2c_inverse(spec_buf.data(), img.data());
  ModelInstance m;
  m.j = j;
  m.weight = spec;
  m.image = Image(N);
  for (std::size_t i = 0; i < fft.full_size(); ++i) {
    m.image.px[i] = img[i].real();
    m.imag_residue = std::max(m.imag_residue, std::fabs(img[i].imag()));
  }
  return m;
}

int Mask::column_count() const {
  return static_cast<int>(std::count(columns.begin(), columns.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> Mask::indicator() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out[static_cast<std::size_t>(r) * n + c] = columns[static_cast<std::size_t>(c)];
  return out;
}

Mask make_mask(double h, int N) {
  if (!(h > 0.0 && h <= 0.5)) throw ConfigError("mask half-width h must lie in (0, 1/2]");
  Mask m;
  m.n = N;
  m.h = h;
  m.columns.resize(static_cast<std::size_t>(N));
  for (int c = 0; c < N; ++c) m.columns[static_cast<std::size_t>(c)] = std::fabs(pixel_coordinate(c, N)) <= h ? 1 : 0;
  return m;
}

Mask empty_mask(int N) {
  Mask m;
  m.n = N;
  m.columns.assign(static_cast<std::size_t>(N), 0);
  return m;
}

namespace {
void check_mask(const Image& f, const Mask& m) {
  if (f.n != m.n || f.px.size() != static_cast<std::size_t>(m.n) * m.n)
    throw DimensionMismatch("image and mask sizes differ");
}
}  // namespace

Image project_known(const Image& f, const Mask& m) {
  check_mask(f, m);
  Image out(f.n);
  for (int r = 0; r < f.n; ++r)
    for (int c = 0; c < f.n; ++c)
      if (!m.columns[static_cast<std::size_t>(c)]) out(r, c) = f(r, c);
  return out;
}

Image project_missing(const Image& f, const Mask& m) {
  check_mask(f, m);
  Image out(f.n);
  for (int r = 0; r < f.n; ++r)
    for (int c = 0; c < f.n; ++c)
      if (m.columns[static_cast<std::size_t>(c)]) out(r, c) = f(r, c);
  return out;
}

double filter_recovery_check(const std::function<std::complex<double>(int)>& wft, int N, int J, int omit) {
  double worst = 0.0;
  for (int m2 = -N / 2; m2 < N / 2; ++m2) {
    for (int m1 = -N / 2; m1 < N / 2; ++m1) {
      const Freq xi{static_cast<double>(m1), static_cast<double>(m2)};
      const double low = lowpass_ft(xi);
      double all = low * low, kept = low * low;
      for (int j = 0; j < J; ++j) {
        const double w = corona(xi, j);
        all += w * w;
        if (j != omit) kept += w * w;
      }
      const double completion = std::max(0.0, 1.0 - all);
      worst = std::max(worst, std::abs(wft(m1)) * std::fabs(kept + completion - 1.0));
    }
  }
  return worst;
}

double filter_recovery_check(const WeightSpec& spec, int N, int J, int omit) {
  const WeightTransform wt(spec, N);
  return filter_recovery_check([&](int m) { return wt.at(m); }, N, J, omit);
}

VerticalDecay vertical_decay(const ModelInstance& m, double fit_from) {
  const int N = m.image.n;
  VerticalDecay d;
  d.envelope.assign(static_cast<std::size_t>(N), 0.0);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      d.envelope[static_cast<std::size_t>(r)] = std::max(d.envelope[static_cast<std::size_t>(r)], std::fabs(m.image(r, c)));
  const double peak = *std::max_element(d.envelope.begin(), d.envelope.end());
  // Least squares of log env against log <2^{2j} x2> over the decaying range,
  // using the running max from the far side so oscillation zeros do not bias it.
  const double s = std::ldexp(1.0, 2 * m.j);
  std::vector<double> xs, ys;
  double tail = 0.0;
  for (int r = 0; r < N / 2; ++r) {
    const int row = r;  // rows below the centre line, walking inward
    const double x2 = std::fabs(pixel_coordinate(row, N));
    tail = std::max(tail, d.envelope[static_cast<std::size_t>(row)]);
    if (s * x2 < fit_from || x2 > 0.25 || tail < 1e-13 * peak) continue;
    xs.push_back(std::log(std::sqrt(1.0 + s * s * x2 * x2)));
    ys.push_back(std::log(tail));
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
    d.exponent = sxx > 0 ? -sxy / sxx : 0.0;
  }
  return d;
}

double row_energy_fraction(const Image& f, double width) {
  double in = 0.0, total = 0.0;
  for (int r = 0; r < f.n; ++r) {
    double e = 0.0;
    for (int c = 0; c < f.n; ++c) e += f(r, c) * f(r, c);
    total += e;
    if (std::fabs(pixel_coordinate(r, f.n)) <= width) in += e;
  }
  return total > 0 ? in / total : 0.0;
}

}  // namespace unishear
