#include "unishear/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "unishear/errors.hpp"

namespace unishear {

double ClusterSpec::tube(int s) const { return std::exp2((epsilon - 2.0) * s); }

bool ClusterSpec::contains_band(const BandDescriptor& b) const {
  return b.iota == Orientation::vertical && std::abs(b.l) <= 1 &&
         std::find(scales.begin(), scales.end(), b.j) != scales.end();
}

bool ClusterSpec::contains(const ShearletIndex& g) const {
  if (g.iota != Orientation::vertical || std::abs(g.l) > 1) return false;
  if (std::find(scales.begin(), scales.end(), g.j) == scales.end()) return false;
  const double d = std::fabs(static_cast<double>(g.k[1] - static_cast<std::int64_t>(g.l) * g.k[0]));
  return d <= std::exp2(epsilon * g.j);
}

bool ClusterSpec::contains_row(const BandDescriptor& b, int row, int N) const {
  return contains_band(b) && std::fabs(pixel_coordinate(row, N)) <= tube(b.j);
}

namespace {

// Integer range [lo, hi) of k with 2^{-e} k in [-1/2, 1/2), scaled by `half`
// (1 for the ordinary lattice, 2 for the half-integer one).
std::pair<std::int64_t, std::int64_t> lattice_range(int e, int half) {
  if (e < 0) throw ConfigError("lattice mode needs alpha_j >= 0");
  const std::int64_t count = (std::int64_t{1} << e) * half;
  if (count == 1) return {0, 1};
  return {-count / 2, count / 2};
}

}  // namespace

ClusterSpec build_cluster(int j, double epsilon, const DigitalSystem& sys, bool neighbor_extension) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  const int J = sys.grid().J;
  if (j < 0 || j >= J) throw ConfigError("cluster scale outside the system");
  ClusterSpec c;
  c.j = j;
  c.epsilon = epsilon;
  c.neighbor_extension = neighbor_extension;
  for (int s = neighbor_extension ? j - 1 : j; s <= (neighbor_extension ? j + 1 : j); ++s)
    if (s >= 0 && s < J) c.scales.push_back(s);
  const ScalingSequence& seq = sys.sequence();
  for (int s : c.scales) {
    const std::int64_t L = seq.shear_bound(s);
    const auto [k1lo, k1hi] = lattice_range(seq.alpha_times_j(s), 1);
    const auto [nlo, nhi] = lattice_range(2 * s, 1);
    const auto reach = static_cast<std::int64_t>(std::floor(std::exp2(epsilon * s)));
    for (int l = -1; l <= 1; ++l) {
      if (std::abs(l) >= L) continue;
      for (std::int64_t k1 = k1lo; k1 < k1hi; ++k1)
        for (std::int64_t n = std::max(nlo, -reach); n < std::min(nhi, reach + 1); ++n) {
          ShearletIndex g;
          g.j = s;
          g.l = l;
          g.k[0] = k1;
          g.k[1] = n + l * k1;
          g.iota = Orientation::vertical;
          g.alpha = seq.alpha(s);
          c.members.push_back(g);
        }
    }
  }
  return c;
}

std::vector<std::complex<double>> band_response(const Image& f, std::size_t band, const DigitalSystem& sys,
                                                const std::vector<std::array<double, 2>>& points) {
  const int N = sys.N();
  if (f.n != N) throw DimensionMismatch("image size does not match grid");
  const Fft2d& fft = sys.fft();
  AlignedBuffer<double> in(fft.full_size());
  AlignedBuffer<cplx> F(fft.half_size());
  std::copy(f.px.begin(), f.px.end(), in.data());
  fft.r2c(in.data(), F.data());

  struct Term {
    int m1, m2;
    cplx v;
  };
  std::vector<Term> terms;
  const BandSupport& sup = sys.support(band);
  const int hc = N / 2 + 1;
  const double inv = 1.0 / (static_cast<double>(N) * N);
  for (std::size_t i = 0; i < sup.index.size(); ++i) {
    const int k2 = static_cast<int>(sup.index[i]) / hc, k1 = static_cast<int>(sup.index[i]) % hc;
    const int m1 = k1 == N / 2 ? -N / 2 : k1, m2 = signed_frequency(k2, N);
    const cplx v = F[sup.index[i]] * (sup.weight[i] * inv);
    terms.push_back({m1, m2, v});
    if (k1 > 0 && k1 < N / 2) terms.push_back({-m1, m2 == -N / 2 ? m2 : -m2, std::conj(v)});
  }
  const BandDescriptor& d = sys.bands()[band];
  const double scale = d.iota == Orientation::completion ? 1.0 / N : d.normalization * lattice_factor(d);
  const double x0 = pixel_coordinate(0, N);
  std::vector<std::complex<double>> out;
  out.reserve(points.size());
  std::vector<cplx> e1(static_cast<std::size_t>(N) + 1), e2(static_cast<std::size_t>(N) + 1);
  for (const auto& p : points) {
    for (int m = -N / 2; m <= N / 2; ++m) {
      const double a1 = 2.0 * std::numbers::pi * m * (p[0] - x0), a2 = 2.0 * std::numbers::pi * m * (p[1] - x0);
      e1[static_cast<std::size_t>(m + N / 2)] = {std::cos(a1), std::sin(a1)};
      e2[static_cast<std::size_t>(m + N / 2)] = {std::cos(a2), std::sin(a2)};
    }
    cplx s = 0.0;
    for (const Term& t : terms)
      s += t.v * e1[static_cast<std::size_t>(t.m1 + N / 2)] * e2[static_cast<std::size_t>(t.m2 + N / 2)];
    out.push_back(scale * s);
  }
  return out;
}

std::vector<LatticeCoefficient> lattice_coefficients(const Image& f, std::size_t band, const DigitalSystem& sys) {
  const BandDescriptor& d = sys.bands()[band];
  std::vector<ShearletIndex> idx;
  std::vector<std::array<double, 2>> pts;
  auto add = [&](std::int64_t k1, std::int64_t k2, double t1, double t2) {
    ShearletIndex g;
    g.j = d.j;
    g.l = d.l;
    g.k[0] = k1;
    g.k[1] = k2;
    g.iota = d.iota;
    g.alpha = d.alpha;
    idx.push_back(g);
    pts.push_back({t1, t2});
  };
  const int N = sys.N();
  switch (d.iota) {
    case Orientation::coarse:
      add(0, 0, 0.0, 0.0);
      break;
    case Orientation::completion:
      for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) add(c, r, pixel_coordinate(c, N), pixel_coordinate(r, N));
      break;
    default: {
      const int m = sys.sequence().alpha_times_j(d.j);
      const int half = d.iota == Orientation::boundary && d.j >= 1 ? 2 : 1;
      const auto [alo, ahi] = lattice_range(m, half);   // coordinate scaled by 2^{-alpha j}
      const auto [slo, shi] = lattice_range(2 * d.j, half);  // coordinate scaled by 2^{-2j}
      const double sa = std::ldexp(1.0, -m) / half, ss = std::ldexp(1.0, -2 * d.j) / half;
      const bool vertical = d.iota == Orientation::vertical;
      for (std::int64_t a = alo; a < ahi; ++a)
        for (std::int64_t n = slo; n < shi; ++n) {
          // h (and boundary): t = (2^{-2j}(k1 - l k2), 2^{-alpha j} k2); v: t = (2^{-alpha j} k1, 2^{-2j}(k2 - l k1)).
          if (vertical) add(a, n + d.l * a, sa * a, ss * n);
          else add(n + d.l * a, a, ss * n, sa * a);
        }
    }
  }
  const auto vals = band_response(f, band, sys, pts);
  std::vector<LatticeCoefficient> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = {idx[i], pts[i], vals[i]};
  return out;
}

DeltaReport delta_sparsity(const Image& f, const ClusterSpec& cluster, const DigitalSystem& sys) {
  DeltaReport rep;
  const int N = sys.N();
  std::vector<std::uint8_t> row_in(static_cast<std::size_t>(N));
  stream_bands(
      f, sys,
      [&](std::size_t b, std::span<double> c) {
        const BandDescriptor& d = sys.bands()[b];
        const double w = sys.l1_weight(b);
        const bool scale_in = d.iota != Orientation::coarse && d.iota != Orientation::completion &&
                              std::find(cluster.scales.begin(), cluster.scales.end(), d.j) != cluster.scales.end();
        double in = 0.0, out = 0.0;
        for (int r = 0; r < N; ++r) {
          const bool member = cluster.contains_row(d, r, N);
          double s = 0.0;
          for (int k = 0; k < N; ++k) s += std::fabs(c[static_cast<std::size_t>(r) * N + k]);
          (member ? in : out) += s;
        }
        rep.in_cluster += w * in;
        rep.delta += w * out;
        if (!scale_in) rep.outside_scales += w * out;
      },
      nullptr);
  double peak = 0.0, edge = 0.0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      peak = std::max(peak, std::fabs(f(r, c)));
      if (std::fabs(pixel_coordinate(r, N)) >= 0.45) edge = std::max(edge, std::fabs(f(r, c)));
    }
  rep.boundary_ratio = peak > 0.0 ? edge / peak : 0.0;
  return rep;
}

ProbeSet default_probe_set(const ClusterSpec& cluster, const Mask& mask, const DigitalSystem& sys,
                           double radius_factor, bool mirror_reduce) {
  if (!(radius_factor > 0.0)) throw ConfigError("probe radius factor must be > 0");
  ProbeSet p;
  const int N = sys.N();
  bool symmetric = mirror_reduce;
  for (int c = 0; c < N && symmetric; ++c)
    symmetric = mask.columns[static_cast<std::size_t>(c)] == mask.columns[static_cast<std::size_t>(N - 1 - c)];
  // Distance in columns (periodic) from each column to the mask.
  std::vector<int> dist(static_cast<std::size_t>(N), N);
  for (int c = 0; c < N; ++c)
    if (mask.columns[static_cast<std::size_t>(c)])
      for (int k = 0; k < N; ++k) {
        const int d = std::min(std::abs(k - c), N - std::abs(k - c));
        dist[static_cast<std::size_t>(k)] = std::min(dist[static_cast<std::size_t>(k)], d);
      }
  for (std::size_t b = 0; b < sys.band_count(); ++b) {
    const BandDescriptor& d = sys.bands()[b];
    if (d.iota == Orientation::coarse || d.iota == Orientation::completion) continue;
    if (d.j < cluster.j - 1 || d.j > cluster.j + 1) continue;
    const int e = d.iota == Orientation::horizontal ? 2 * d.j : sys.sequence().alpha_times_j(d.j);
    const double R = radius_factor * N * std::ldexp(1.0, -e);
    std::vector<int> cols;
    std::vector<std::uint8_t> outer;
    for (int c = symmetric ? N / 2 : 0; c < N; ++c) {
      const double dc = dist[static_cast<std::size_t>(c)];
      if (dc > 2.0 * R) continue;
      cols.push_back(c);
      outer.push_back(dc > R);
    }
    p.bands.push_back(b);
    p.columns.push_back(std::move(cols));
    p.outer.push_back(std::move(outer));
  }
  return p;
}

ProbeSet full_probe_set(const DigitalSystem& sys) {
  ProbeSet p;
  std::vector<int> all(static_cast<std::size_t>(sys.N()));
  for (int c = 0; c < sys.N(); ++c) all[static_cast<std::size_t>(c)] = c;
  for (std::size_t b = 0; b < sys.band_count(); ++b) {
    p.bands.push_back(b);
    p.columns.push_back(all);
    p.outer.emplace_back(all.size(), 0);
  }
  return p;
}

std::vector<double> band_kernel(const DigitalSystem& sys, std::size_t b) {
  const Fft2d& fft = sys.fft();
  AlignedBuffer<cplx> spec(fft.half_size());
  AlignedBuffer<double> out(fft.full_size());
  const BandSupport& sup = sys.support(b);
  const double inv = 1.0 / static_cast<double>(fft.full_size());
  for (std::size_t i = 0; i < sup.index.size(); ++i) spec[sup.index[i]] = sup.weight[i] * inv;
  fft.c2r(spec.data(), out.data());
  return std::vector<double>(out.data(), out.data() + out.size());
}

double masked_inner_product(const DigitalSystem& sys, const Mask& mask, std::size_t b1, int r1, int c1,
                            std::size_t b2, int r2, int c2) {
  const int N = sys.N();
  const auto k1 = band_kernel(sys, b1), k2 = band_kernel(sys, b2);
  auto at = [N](const std::vector<double>& k, int r, int c) {
    return k[static_cast<std::size_t>(((r % N) + N) % N) * N + static_cast<std::size_t>(((c % N) + N) % N)];
  };
  double s = 0.0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      if (mask.columns[static_cast<std::size_t>(c)]) s += at(k1, r - r1, c - c1) * at(k2, r - r2, c - c2);
  return s;
}

double CoherenceReport::truncation_change() const {
  return mu > 0.0 ? std::fabs(mu_extended - mu) / mu : 0.0;
}

CoherenceReport cluster_coherence(const ClusterSpec& cluster, const Mask& mask, const DigitalSystem& sys,
                                  const ProbeSet& probes) {
  CoherenceReport rep;
  if (mask.empty()) return rep;
  const int N = sys.N();
  const Fft2d& fft = sys.fft();
  const double inv = 1.0 / static_cast<double>(fft.full_size());

  struct Member {
    std::size_t band;
    int lo, hi;  // tube rows [lo, hi]
  };
  std::vector<Member> members;
  for (std::size_t b = 0; b < sys.band_count(); ++b) {
    const BandDescriptor& d = sys.bands()[b];
    if (!cluster.contains_band(d)) continue;
    int lo = N, hi = -1;
    for (int r = 0; r < N; ++r)
      if (cluster.contains_row(d, r, N)) lo = std::min(lo, r), hi = std::max(hi, r);
    if (hi >= lo) members.push_back({b, lo, hi});
  }
  if (members.empty()) return rep;

  AlignedBuffer<double> h(fft.full_size()), a(fft.full_size());
  AlignedBuffer<cplx> H(fft.half_size()), tmp(fft.half_size());
  std::vector<double> rows(static_cast<std::size_t>(N)), prefix(2 * static_cast<std::size_t>(N) + 1), total(static_cast<std::size_t>(N));

  for (std::size_t pi = 0; pi < probes.bands.size(); ++pi) {
    const std::size_t b2 = probes.bands[pi];
    const auto kernel = band_kernel(sys, b2);
    const double w2 = sys.l1_weight(b2);
    for (std::size_t ci = 0; ci < probes.columns[pi].size(); ++ci) {
      const int p1 = probes.columns[pi][ci];
      const bool outer = pi < probes.outer.size() && ci < probes.outer[pi].size() && probes.outer[pi][ci];
      // h = 1_M * phi_{b2, (0, p1)}
      for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
          const std::size_t i = static_cast<std::size_t>(r) * N + c;
          h[i] = mask.columns[static_cast<std::size_t>(c)]
                     ? kernel[static_cast<std::size_t>(r) * N + static_cast<std::size_t>(((c - p1) % N + N) % N)]
                     : 0.0;
        }
      fft.r2c(h.data(), H.data());
      std::fill(total.begin(), total.end(), 0.0);
      for (const Member& m : members) {
        const BandSupport& sup = sys.support(m.band);
        tmp.zero();
        for (std::size_t i = 0; i < sup.index.size(); ++i) tmp[sup.index[i]] = H[sup.index[i]] * (sup.weight[i] * inv);
        fft.c2r(tmp.data(), a.data());
        // a(q) = <P_M phi_{b1,q}, P_M phi_{b2,(0,p1)}>; shifting the probe by d rows shifts a by d.
        for (int r = 0; r < N; ++r) {
          double s = 0.0;
          for (int c = 0; c < N; ++c) s += std::fabs(a[static_cast<std::size_t>(r) * N + c]);
          rows[static_cast<std::size_t>(r)] = s;
        }
        prefix[0] = 0.0;
        for (std::size_t i = 0; i < 2 * static_cast<std::size_t>(N); ++i) prefix[i + 1] = prefix[i] + rows[i % N];
        const double ratio = sys.l1_weight(m.band) / w2;
        for (int d = 0; d < N; ++d) {
          // sum over tube rows y of rows[y - d]
          const int from = ((m.lo - d) % N + N) % N;
          const int len = m.hi - m.lo + 1;
          total[static_cast<std::size_t>(d)] += ratio * (prefix[static_cast<std::size_t>(from + len)] - prefix[static_cast<std::size_t>(from)]);
        }
      }
      ++rep.probes;
      for (int d = 0; d < N; ++d) {
        const double t = total[static_cast<std::size_t>(d)];
        rep.mu_extended = std::max(rep.mu_extended, t);
        if (!outer && t > rep.mu) {
          rep.mu = t;
          rep.band = b2;
          rep.row = d;
          rep.col = p1;
        }
      }
    }
  }
  return rep;
}

double cluster_coherence_bruteforce(const ClusterSpec& cluster, const Mask& mask, const DigitalSystem& sys,
                                    const ProbeSet& probes) {
  const int N = sys.N();
  std::vector<std::vector<double>> kernels(sys.band_count());
  for (std::size_t b = 0; b < sys.band_count(); ++b) kernels[b] = band_kernel(sys, b);
  auto at = [N](const std::vector<double>& k, int r, int c) {
    return k[static_cast<std::size_t>(((r % N) + N) % N) * N + static_cast<std::size_t>(((c % N) + N) % N)];
  };
  std::vector<int> mcols;
  for (int c = 0; c < N; ++c)
    if (mask.columns[static_cast<std::size_t>(c)]) mcols.push_back(c);
  double mu = 0.0;
  for (std::size_t pi = 0; pi < probes.bands.size(); ++pi) {
    const std::size_t b2 = probes.bands[pi];
    for (int p1 : probes.columns[pi])
      for (int p2 = 0; p2 < N; ++p2) {
        double row_sum = 0.0;
        for (std::size_t b1 = 0; b1 < sys.band_count(); ++b1) {
          const BandDescriptor& d = sys.bands()[b1];
          if (!cluster.contains_band(d)) continue;
          for (int q2 = 0; q2 < N; ++q2) {
            if (!cluster.contains_row(d, q2, N)) continue;
            for (int q1 = 0; q1 < N; ++q1) {
              double ip = 0.0;
              for (int r = 0; r < N; ++r)
                for (int c : mcols) ip += at(kernels[b1], r - q2, c - q1) * at(kernels[b2], r - p2, c - p1);
              row_sum += sys.l1_weight(b1) / sys.l1_weight(b2) * std::fabs(ip);
            }
          }
        }
        mu = std::max(mu, row_sum);
      }
  }
  return mu;
}

Certificate verify_error_bound(double delta, double mu, double observed, double tol) {
  Certificate c;
  if (!(mu < 0.5)) return c;
  c.applicable = true;
  c.bound = 2.0 * delta / (1.0 - 2.0 * mu);
  c.holds = observed <= c.bound + tol;
  c.violated_by = std::max(0.0, observed - c.bound);
  return c;
}

std::vector<DecayRow> coefficient_decay_profile(const Image& f, const DigitalSystem& sys) {
  const int N = sys.N();
  std::vector<DecayRow> out;
  stream_bands(
      f, sys,
      [&](std::size_t b, std::span<double> c) {
        const BandDescriptor& d = sys.bands()[b];
        if (d.iota == Orientation::coarse || d.iota == Orientation::completion) return;
        const double scale = d.normalization * lattice_factor(d), s = std::ldexp(1.0, 2 * d.j);
        std::map<int, double> best;
        for (int r = 0; r < N; ++r)
          for (int k = 0; k < N; ++k) {
            const double x1 = std::fabs(pixel_coordinate(k, N)), x2 = std::fabs(pixel_coordinate(r, N));
            const double dist = d.iota == Orientation::vertical ? x2 : d.iota == Orientation::horizontal ? x1 : std::max(x1, x2);
            const int bucket = static_cast<int>(std::floor(s * dist));
            double& m = best[bucket];
            m = std::max(m, scale * std::fabs(c[static_cast<std::size_t>(r) * N + k]));
          }
        for (const auto& [bucket, m] : best) out.push_back({d.j, d.iota, d.l, bucket, m});
      },
      nullptr);
  return out;
}

std::vector<double> max_envelope(const std::vector<double>& v, int width) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t k = i; k < std::min(v.size(), i + static_cast<std::size_t>(width)); ++k) out[i] = std::max(out[i], v[k]);
  return out;
}

}  // namespace unishear
