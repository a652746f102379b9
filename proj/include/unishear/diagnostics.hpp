#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "unishear/image.hpp"
#include "unishear/model.hpp"
#include "unishear/transform.hpp"

namespace unishear {

// Lambda_j (or Lambda_j- u Lambda_j u Lambda_j+): vertical bands with |l| <= 1
// and translations in the tube |k2 - l k1| <= 2^{eps j'}, i.e. |t2| <= 2^{(eps-2) j'}.
struct ClusterSpec {
  int j = 0;
  double epsilon = 0.1;
  bool neighbor_extension = false;
  std::vector<int> scales;              // j, or j-1..j+1 clipped to the system
  std::vector<ShearletIndex> members;   // lattice members inside the unit torus

  bool contains(const ShearletIndex& g) const;
  bool contains_band(const BandDescriptor& b) const;
  // Continuum half-width of the tube at scale s.
  double tube(int s) const;
  // Full-grid membership of pixel row `row` for band b.
  bool contains_row(const BandDescriptor& b, int row, int N) const;
};

ClusterSpec build_cluster(int j, double epsilon, const DigitalSystem& sys, bool neighbor_extension = false);

struct LatticeCoefficient {
  ShearletIndex index;
  std::array<double, 2> t{};  // continuum position on the torus
  std::complex<double> value;
};

// Continuum-normalized coefficients at the band's lattice points in [-1/2,1/2)^2,
// by direct trigonometric summation over the band support.
std::vector<LatticeCoefficient> lattice_coefficients(const Image& f, std::size_t band, const DigitalSystem& sys);

// normalization * lattice_factor * g_b(x) at arbitrary continuum points x.
std::vector<std::complex<double>> band_response(const Image& f, std::size_t band, const DigitalSystem& sys,
                                                const std::vector<std::array<double, 2>>& points);

struct DeltaReport {
  double delta = 0.0;          // weighted l1 mass outside the cluster
  double in_cluster = 0.0;     // weighted l1 mass inside
  double outside_scales = 0.0; // part of delta on bands outside the cluster scales
  double boundary_ratio = 0.0; // max |f| on rows with |x2| >= 0.45 over max |f|
};

// Over every band and every grid translation (the periodic grid needs no
// truncation); boundary_ratio flags periodization effects.
DeltaReport delta_sparsity(const Image& f, const ClusterSpec& cluster, const DigitalSystem& sys);

// Candidate gamma_2 set: bands, and per band the probe columns.
struct ProbeSet {
  std::vector<std::size_t> bands;
  std::vector<std::vector<int>> columns;
  // Parallel to columns: 1 for probes beyond the nominal radius, which only
  // feed the truncation check.
  std::vector<std::vector<std::uint8_t>> outer;
};

// Bands at scales j-1..j+1 with columns within radius_factor times the
// band's x1 extent of the mask (2^{-alpha_s s} for v and boundary bands,
// 2^{-2s} for h bands, in pixels: times N). Columns out to twice that radius
// are included and flagged as outer. For a mirror-symmetric mask only
// columns with x1 >= 0 are kept: reflecting x1 maps shear l to -l and the
// cluster, mask and weights onto themselves, so the row sums repeat.
ProbeSet default_probe_set(const ClusterSpec& cluster, const Mask& mask, const DigitalSystem& sys,
                           double radius_factor = 1.0, bool mirror_reduce = true);
// Every band, every column.
ProbeSet full_probe_set(const DigitalSystem& sys);

struct CoherenceReport {
  double mu = 0.0;           // over inner probes
  double mu_extended = 0.0;  // over all probes
  // |mu_extended - mu| / mu, or 0 when mu = 0.
  double truncation_change() const;
  std::size_t band = 0;  // maximizing gamma_2
  int row = 0, col = 0;
  std::size_t probes = 0;
};

// max over gamma_2 in the probe set (all rows) of
// sum_{gamma_1 in cluster} (w_1 / w_2) |<P_M phi_1, P_M phi_2>|, with w the
// weights of the l1 analysis norm.
CoherenceReport cluster_coherence(const ClusterSpec& cluster, const Mask& mask, const DigitalSystem& sys,
                                  const ProbeSet& probes);

// Exhaustive double loop over explicit atoms; for small grids only.
double cluster_coherence_bruteforce(const ClusterSpec& cluster, const Mask& mask, const DigitalSystem& sys,
                                    const ProbeSet& probes);

// <P_M phi_{b1,(r1,c1)}, P_M phi_{b2,(r2,c2)}> for full-grid atoms.
double masked_inner_product(const DigitalSystem& sys, const Mask& mask, std::size_t b1, int r1, int c1,
                            std::size_t b2, int r2, int c2);

// Spatial atom of band b centred on pixel (0, 0), periodic.
std::vector<double> band_kernel(const DigitalSystem& sys, std::size_t b);

struct Certificate {
  bool applicable = false;
  double bound = 0.0;
  bool holds = false;
  double violated_by = 0.0;
};

// 2 delta / (1 - 2 mu) when mu < 1/2.
Certificate verify_error_bound(double delta, double mu, double observed, double tol = 0.0);

struct DecayRow {
  int j = 0;
  Orientation iota = Orientation::vertical;
  int l = 0;
  int distance = 0;  // tube distance bucket floor(2^{2j} |x|)
  double max_abs = 0.0;
};

// Max |continuum-normalized coefficient| per band and tube distance (distance
// in x2 for vertical bands, x1 for horizontal, max of both for boundary).
std::vector<DecayRow> coefficient_decay_profile(const Image& f, const DigitalSystem& sys);

// Running max over windows of `width` distance buckets, for oscillation smoothing.
std::vector<double> max_envelope(const std::vector<double>& v, int width = 8);

}  // namespace unishear
