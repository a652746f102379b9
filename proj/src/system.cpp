#include "unishear/system.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "unishear/errors.hpp"

namespace unishear {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw ConfigError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g == 0 ? 0 : n / g;
  den = g == 0 ? 1 : d / g;
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("not a rational: '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos)
    return Rational(parse_int(trim(s.substr(0, slash))), parse_int(trim(s.substr(slash + 1))));
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    const std::string_view frac = s.substr(dot + 1);
    if (frac.size() > 15) throw ConfigError("too many decimals: '" + std::string(s) + "'");
    digits += frac;
    if (digits.empty() || digits == "-" || digits == "+") throw ConfigError("not a rational: '" + std::string(s) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(parse_int(digits[0] == '+' ? std::string_view(digits).substr(1) : std::string_view(digits)), den);
  }
  return Rational(parse_int(s[0] == '+' ? s.substr(1) : s), 1);
}

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

ScalingSequence ScalingSequence::validated(std::vector<Rational> values) {
  if (values.empty()) throw ConfigError("scaling sequence is empty");
  if (values[0].num != 0) throw WrongAnchor();
  for (std::size_t j = 1; j < values.size(); ++j) {
    const Rational& a = values[j];
    const std::int64_t jj = static_cast<std::int64_t>(j);
    if ((a.num * jj) % a.den != 0) throw NotAdmissible(static_cast<int>(j));
    const std::int64_t m = a.num * jj / a.den;
    if (m > 2 * jj - 1) throw NotAdmissible(static_cast<int>(j));
    // Shear counts beyond 2^20 per cone are not representable on any grid we build.
    if (2 * jj - m > 20) throw NotAdmissible(static_cast<int>(j));
  }
  ScalingSequence s;
  s.values_ = std::move(values);
  return s;
}

int ScalingSequence::alpha_times_j(int j) const {
  const Rational& a = values_.at(j);
  return static_cast<int>(a.num * j / a.den);
}

std::int64_t ScalingSequence::shear_bound(int j) const { return std::int64_t{1} << shear_exponent(j); }

ScalingSequence validate_scaling_sequence(std::vector<Rational> values) {
  return ScalingSequence::validated(std::move(values));
}

ScalingSequence preset_alpha(double alpha, int J) {
  if (!(alpha < 2.0)) throw ConfigError("preset alpha must be < 2");
  if (J < 1) throw ConfigError("J must be >= 1");
  std::vector<Rational> v{Rational(0)};
  for (int j = 1; j < J; ++j) {
    // Nearest m/j; exact halves round up (toward the larger alpha).
    std::int64_t m = static_cast<std::int64_t>(std::floor(alpha * j + 0.5));
    m = std::min<std::int64_t>(m, 2 * j - 1);
    v.emplace_back(m, j);
  }
  return ScalingSequence::validated(std::move(v));
}

ScalingSequence preset_wavelet(int J) {
  if (J < 1) throw ConfigError("J must be >= 1");
  std::vector<Rational> v{Rational(0)};
  for (int j = 1; j < J; ++j) v.emplace_back(2 * j - 1, j);
  return ScalingSequence::validated(std::move(v));
}

ScalingSequence parse_preset(std::string_view spec, int J) {
  spec = trim(spec);
  if (spec == "wavelet") return preset_wavelet(J);
  if (spec == "parabolic") return preset_alpha(1.0, J);
  if (spec.starts_with("alpha:")) {
    const std::string s(spec.substr(6));
    char* end = nullptr;
    const double a = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ConfigError("bad alpha in preset '" + std::string(spec) + "'");
    return preset_alpha(a, J);
  }
  if (spec.starts_with("seq:")) {
    std::vector<Rational> v;
    std::string_view rest = spec.substr(4);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      v.push_back(parse_rational(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (static_cast<int>(v.size()) != J)
      throw ConfigError("sequence length " + std::to_string(v.size()) + " does not match J=" + std::to_string(J));
    return ScalingSequence::validated(std::move(v));
  }
  throw ConfigError("unknown preset '" + std::string(spec) + "'");
}

const char* orientation_name(Orientation o) {
  switch (o) {
    case Orientation::coarse: return "coarse";
    case Orientation::horizontal: return "h";
    case Orientation::vertical: return "v";
    case Orientation::boundary: return "boundary";
    case Orientation::completion: return "completion";
  }
  return "?";
}

std::vector<BandDescriptor> enumerate_bands(const ScalingSequence& seq) {
  std::vector<BandDescriptor> out;
  out.push_back(BandDescriptor{});
  for (int j = 0; j < seq.scales(); ++j) {
    const std::int64_t L = seq.shear_bound(j);
    const double norm = std::sqrt(std::ldexp(1.0, -(2 * j + seq.alpha_times_j(j))));
    auto add = [&](Orientation o, std::int64_t l) {
      out.push_back(BandDescriptor{j, static_cast<int>(l), o, seq.alpha(j), L, norm});
    };
    for (std::int64_t l = -L + 1; l < L; ++l) add(Orientation::horizontal, l);
    for (std::int64_t l = -L + 1; l < L; ++l) add(Orientation::vertical, l);
    add(Orientation::boundary, -L);
    add(Orientation::boundary, L);
  }
  return out;
}

std::size_t expected_band_count(const ScalingSequence& seq) {
  std::size_t n = 1;
  for (int j = 0; j < seq.scales(); ++j) n += 2 * (2 * seq.shear_bound(j) - 1) + 2;
  return n;
}

double boundary_horizontal_formula(const BandDescriptor& b, Freq xi) {
  if (xi[0] == 0.0) return 0.0;
  return corona(xi, b.j) * bump(static_cast<double>(b.shear_bound) * xi[1] / xi[0] - b.l);
}

double boundary_vertical_formula(const BandDescriptor& b, Freq xi) {
  if (xi[1] == 0.0) return 0.0;
  return corona(xi, b.j) * bump(static_cast<double>(b.shear_bound) * xi[0] / xi[1] - b.l);
}

double band_weight(const BandDescriptor& b, Freq xi) {
  switch (b.iota) {
    case Orientation::coarse: return lowpass_ft(xi);
    case Orientation::horizontal: return boundary_horizontal_formula(b, xi);
    case Orientation::vertical: return boundary_vertical_formula(b, xi);
    case Orientation::boundary:
      return std::fabs(xi[1]) <= std::fabs(xi[0]) ? boundary_horizontal_formula(b, xi)
                                                   : boundary_vertical_formula(b, xi);
    case Orientation::completion: return 0.0;  // grid-dependent; see DigitalSystem
  }
  return 0.0;
}

double lattice_factor(const BandDescriptor& b) {
  return b.iota == Orientation::boundary && b.j >= 1 ? 0.5 : 1.0;
}

double atom_ft(const BandDescriptor& b, Freq xi) {
  return b.normalization * lattice_factor(b) * band_weight(b, xi);
}

std::string band_listing_line(const BandDescriptor& b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", b.normalization);
  std::ostringstream os;
  os << b.j << ',' << b.l << ',' << orientation_name(b.iota) << ',' << b.alpha.num << ',' << b.alpha.den << ','
     << buf;
  return os.str();
}

}  // namespace unishear
