#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "doctest.h"
#include "unishear/errors.hpp"
#include "unishear/io.hpp"

using namespace unishear;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path p = [] {
    auto d = fs::temp_directory_path() / ("unishear_io_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return p;
}

std::string bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Image random_image(int n, unsigned seed) {
  std::mt19937 g(seed);
  std::normal_distribution<double> d;
  Image f(n);
  for (double& v : f.px) v = d(g);
  return f;
}

}  // namespace

TEST_CASE("raw round trip is bit exact") {
  const Image f = random_image(16, 1);
  RawHeader h;
  h.n = 16;
  h.scale_key = "j";
  h.scale = 2;
  h.rho = 0.125;
  h.h = 1.0 / 3.0;
  const auto p = scratch() / "a.raw";
  write_raw(p.string(), f, h);
  const auto r = read_raw(p.string());
  CHECK(r.header.n == 16);
  CHECK(r.header.scale_key == "j");
  CHECK(r.header.scale == 2);
  CHECK(r.header.T == 0.5);
  CHECK(r.header.rho == 0.125);
  CHECK(r.header.h == 1.0 / 3.0);
  CHECK(std::memcmp(r.image.px.data(), f.px.data(), f.px.size() * sizeof(double)) == 0);
  // Rewriting gives identical bytes.
  const auto q = scratch() / "b.raw";
  write_raw(q.string(), r.image, r.header);
  CHECK(bytes(p) == bytes(q));
  CHECK(read_image_any(p.string()).px == f.px);
}

TEST_CASE("raw errors") {
  CHECK_THROWS_AS(read_raw((scratch() / "missing.raw").string()), IoError);
  const auto p = scratch() / "trunc.raw";
  write_raw(p.string(), random_image(8, 2), RawHeader{8});
  const std::string b = bytes(p);
  std::ofstream(p, std::ios::binary) << b.substr(0, b.size() - 8);
  CHECK_THROWS_AS(read_raw(p.string()), IoError);
  std::ofstream(p, std::ios::binary) << b << "x";
  CHECK_THROWS_AS(read_raw(p.string()), IoError);
  std::ofstream(p, std::ios::binary) << "garbage\n";
  CHECK_THROWS_AS(read_raw(p.string()), IoError);
  CHECK_THROWS_AS(write_raw("/nonexistent_dir/x.raw", Image(4), RawHeader{4}), IoError);
}

TEST_CASE("pgm round trip") {
  Image f(4);
  for (std::size_t i = 0; i < f.px.size(); ++i) f.px[i] = static_cast<double>(i);
  const auto g = to_gray(f);
  CHECK(g.px.front() == 0);
  CHECK(g.px.back() == 255);
  CHECK(to_gray(Image(4, 3.0)).px == std::vector<std::uint8_t>(16, 0));
  const auto p = scratch() / "a.pgm";
  write_pgm(p.string(), g);
  const auto r = read_pgm(p.string());
  CHECK(r.width == 4);
  CHECK(r.height == 4);
  CHECK(r.px == g.px);
  const auto q = scratch() / "b.pgm";
  write_pgm(q.string(), r);
  CHECK(bytes(p) == bytes(q));
  CHECK(read_image_any(p.string()).px == gray_to_image(g).px);
  CHECK(gray_to_image(g).px.back() == 1.0);
}

TEST_CASE("coefficient dump round trip") {
  const auto sys = DigitalSystem::build(preset_alpha(1.0, 2), 16, 2);
  const auto c = analyze(random_image(16, 3), sys);
  const auto p = scratch() / "c.bin";
  write_coefficients(p.string(), c, sys);
  CHECK(bytes(p).substr(0, 4) == "UNSH");
  const auto r = read_coefficients(p.string());
  CHECK(r.n == 16);
  CHECK(r.J == 2);
  REQUIRE(r.coefficients.bands.size() == c.bands.size());
  for (std::size_t b = 0; b < c.bands.size(); ++b) {
    CHECK(std::memcmp(r.coefficients.bands[b].data(), c.bands[b].data(), c.bands[b].size() * sizeof(double)) == 0);
    CHECK(r.band_j[b] == sys.bands()[b].j);
    CHECK(r.band_l[b] == sys.bands()[b].l);
    CHECK(r.band_orientation[b] == static_cast<int>(sys.bands()[b].iota));
  }
  const auto q = scratch() / "d.bin";
  write_coefficients(q.string(), r.coefficients, sys);
  CHECK(bytes(p) == bytes(q));
  std::ofstream(q, std::ios::binary) << "UNSX";
  CHECK_THROWS_AS(read_coefficients(q.string()), IoError);
}

TEST_CASE("mask images") {
  const Mask m = make_mask(0.1, 32);
  const Image img = mask_to_image(m);
  const Mask back = mask_from_image(img, m.h);
  CHECK(back.columns == m.columns);
  Image bad = img;
  bad(3, 16) = 1.0 - bad(3, 16);
  CHECK_THROWS_AS(mask_from_image(bad, 0.1), ConfigError);
  bad = img;
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(mask_from_image(bad, 0.1), ConfigError);
}

TEST_CASE("text output") {
  const auto p = scratch() / "t.txt";
  write_text(p.string(), "a\nb\n");
  CHECK(bytes(p) == "a\nb\n");
  CHECK_THROWS_AS(write_text("/nonexistent_dir/t.txt", "x"), IoError);
}
