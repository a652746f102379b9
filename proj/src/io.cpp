#include "unishear/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "unishear/errors.hpp"

namespace unishear {

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is, const std::string& path) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw IoError("truncated file: " + path);
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  return is;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T header_value(std::istream& is, const std::string& key, const std::string& path) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("truncated header: " + path);
  std::istringstream ls(line);
  std::string k;
  T v{};
  if (!(ls >> k >> v) || k != key) throw IoError("bad header line '" + line + "' in " + path);
  return v;
}

}  // namespace

void write_raw(const std::string& path, const Image& img, RawHeader header) {
  header.n = img.n;
  std::ofstream os = open_out(path);
  os << "N " << header.n << '\n'
     << header.scale_key << ' ' << header.scale << '\n'
     << "T " << fmt(header.T) << '\n'
     << "rho " << fmt(header.rho) << '\n'
     << "h " << fmt(header.h) << '\n';
  for (double v : img.px) put_le(os, v);
  finish(os, path);
}

RawImage read_raw(const std::string& path) {
  std::ifstream is = open_in(path);
  RawImage r;
  r.header.n = header_value<int>(is, "N", path);
  {
    std::string line;
    if (!std::getline(is, line)) throw IoError("truncated header: " + path);
    std::istringstream ls(line);
    if (!(ls >> r.header.scale_key >> r.header.scale) || (r.header.scale_key != "j" && r.header.scale_key != "J"))
      throw IoError("bad scale line in " + path);
  }
  r.header.T = header_value<double>(is, "T", path);
  r.header.rho = header_value<double>(is, "rho", path);
  r.header.h = header_value<double>(is, "h", path);
  if (r.header.n < 1 || r.header.n > (1 << 15)) throw IoError("bad image size in " + path);
  r.image = Image(r.header.n);
  for (double& v : r.image.px) v = get_le<double>(is, path);
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in " + path);
  return r;
}

GrayImage to_gray(const Image& img) {
  GrayImage g;
  g.width = g.height = img.n;
  g.px.resize(img.px.size());
  double lo = 0.0, hi = 0.0;
  if (!img.px.empty()) {
    lo = *std::min_element(img.px.begin(), img.px.end());
    hi = *std::max_element(img.px.begin(), img.px.end());
  }
  for (std::size_t i = 0; i < img.px.size(); ++i)
    g.px[i] = hi > lo ? static_cast<std::uint8_t>(std::lround(255.0 * (img.px[i] - lo) / (hi - lo))) : 0;
  return g;
}

void write_pgm(const std::string& path, const GrayImage& g) {
  std::ofstream os = open_out(path);
  os << "P5\n" << g.width << ' ' << g.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(g.px.data()), static_cast<std::streamsize>(g.px.size()));
  finish(os, path);
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream is = open_in(path);
  auto token = [&]() {
    std::string t;
    char ch;
    while (is.get(ch)) {
      if (ch == '#') {
        std::string rest;
        std::getline(is, rest);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!t.empty()) break;
        continue;
      }
      t += ch;
    }
    return t;
  };
  if (token() != "P5") throw IoError("not a binary graymap: " + path);
  GrayImage g;
  try {
    g.width = std::stoi(token());
    g.height = std::stoi(token());
    if (std::stoi(token()) != 255) throw IoError("only maxval 255 is supported: " + path);
  } catch (const std::logic_error&) {
    throw IoError("bad graymap header: " + path);
  }
  if (g.width < 1 || g.height < 1) throw IoError("bad graymap size: " + path);
  g.px.resize(static_cast<std::size_t>(g.width) * g.height);
  if (!is.read(reinterpret_cast<char*>(g.px.data()), static_cast<std::streamsize>(g.px.size())))
    throw IoError("truncated graymap: " + path);
  return g;
}

Image gray_to_image(const GrayImage& g) {
  if (g.width != g.height) throw DimensionMismatch("graymap must be square");
  Image img(g.width);
  for (std::size_t i = 0; i < g.px.size(); ++i) img.px[i] = g.px[i] / 255.0;
  return img;
}

void write_coefficients(const std::string& path, const CoefficientSet& c, const DigitalSystem& sys) {
  if (c.n != sys.N() || c.bands.size() != sys.band_count())
    throw DimensionMismatch("coefficient set does not match the system");
  std::ofstream os = open_out(path);
  os.write("UNSH", 4);
  put_le<std::uint32_t>(os, 1);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(c.n));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(sys.grid().J));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(c.bands.size()));
  for (std::size_t b = 0; b < c.bands.size(); ++b) {
    const BandDescriptor& d = sys.bands()[b];
    put_le<std::int32_t>(os, d.j);
    put_le<std::int32_t>(os, static_cast<std::int32_t>(d.l));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(d.iota));
    for (double v : c.bands[b]) {
      put_le(os, v);
      put_le(os, 0.0);
    }
  }
  finish(os, path);
}

CoefficientFile read_coefficients(const std::string& path) {
  std::ifstream is = open_in(path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "UNSH", 4) != 0) throw IoError("not a coefficient dump: " + path);
  if (get_le<std::uint32_t>(is, path) != 1) throw IoError("unsupported coefficient dump version: " + path);
  CoefficientFile f;
  f.n = static_cast<int>(get_le<std::uint32_t>(is, path));
  f.J = static_cast<int>(get_le<std::uint32_t>(is, path));
  const std::uint32_t count = get_le<std::uint32_t>(is, path);
  if (f.n < 1 || f.n > (1 << 15) || count > 100000) throw IoError("bad coefficient dump header: " + path);
  f.coefficients.n = f.n;
  const std::size_t size = static_cast<std::size_t>(f.n) * f.n;
  for (std::uint32_t b = 0; b < count; ++b) {
    f.band_j.push_back(get_le<std::int32_t>(is, path));
    f.band_l.push_back(get_le<std::int32_t>(is, path));
    f.band_orientation.push_back(static_cast<int>(get_le<std::uint32_t>(is, path)));
    std::vector<double> band(size);
    for (double& v : band) {
      v = get_le<double>(is, path);
      if (get_le<double>(is, path) != 0.0) throw IoError("nonzero imaginary part in " + path);
    }
    f.coefficients.bands.push_back(std::move(band));
  }
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in " + path);
  return f;
}

Mask mask_from_image(const Image& img, double h) {
  Mask m;
  m.n = img.n;
  m.h = h;
  m.columns.assign(static_cast<std::size_t>(img.n), 0);
  for (int c = 0; c < img.n; ++c) {
    const double v = img(0, c);
    if (v != 0.0 && v != 1.0) throw ConfigError("mask values must be 0 or 1");
    for (int r = 1; r < img.n; ++r)
      if (img(r, c) != v) throw ConfigError("mask must be a union of full columns");
    m.columns[static_cast<std::size_t>(c)] = v == 1.0;
  }
  return m;
}

Image mask_to_image(const Mask& m) {
  Image img(m.n);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) img(r, c) = m.columns[static_cast<std::size_t>(c)] ? 1.0 : 0.0;
  return img;
}

Image read_image_any(const std::string& path) {
  std::ifstream is = open_in(path);
  char head[2] = {0, 0};
  is.read(head, 2);
  is.close();
  if (head[0] == 'P' && head[1] == '5') return gray_to_image(read_pgm(path));
  return read_raw(path).image;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os = open_out(path);
  os << text;
  finish(os, path);
}

}  // namespace unishear
