#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "unishear/config.hpp"
#include "unishear/errors.hpp"

using namespace unishear;

TEST_CASE("defaults are valid") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.N == 512);
  CHECK(c.J == 6);
  CHECK(c.preset == "parabolic");
  CHECK(c.epsilon == 0.1);
  CHECK(c.explicit_keys.empty());
  CHECK(c.preset_list() == std::vector<std::string>{"alpha:0.5", "parabolic", "wavelet"});
}

TEST_CASE("settings") {
  RunConfig c;
  apply_setting(c, "N", "64");
  apply_setting(c, "J", " 3 ");
  apply_setting(c, "rho", "0.2");
  apply_setting(c, "solver", "splitting");
  apply_setting(c, "coherence", "false");
  apply_setting(c, "preset", "seq:0,1,1/2");
  CHECK(c.N == 64);
  CHECK(c.J == 3);
  CHECK(c.weight.rho == 0.2);
  CHECK(c.solver.method == SolverMethod::splitting);
  CHECK(!c.coherence);
  CHECK(c.is_set("rho"));
  CHECK(!c.is_set("h"));
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(apply_setting(c, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "N", "6x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "rho", ""), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "coherence", "maybe"), ConfigError);
}

TEST_CASE("invalid combinations") {
  RunConfig c;
  apply_setting(c, "preset", "seq:0,1,0.3,1,1,1");
  CHECK_THROWS_AS(c.validate(), NotAdmissible);
  c = RunConfig{};
  apply_setting(c, "N", "8");
  apply_setting(c, "J", "4");
  CHECK_THROWS_AS(c.validate(), GridTooSmall);
  c = RunConfig{};
  apply_setting(c, "h", "0.7");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  apply_setting(c, "j", "6");
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(c.validate_scale(), ConfigError);
}

TEST_CASE("config text and files") {
  RunConfig c;
  apply_config_text(c, "# comment\nN = 128   # trailing\n\nJ=4\npreset = wavelet\n");
  CHECK(c.N == 128);
  CHECK(c.J == 4);
  CHECK(c.preset == "wavelet");
  CHECK_THROWS_AS(apply_config_text(c, "N 128\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "unknown = 1\n"), ConfigError);

  const auto p = std::filesystem::temp_directory_path() / ("unishear_cfg_" + std::to_string(::getpid()) + ".conf");
  {
    std::ofstream(p) << render_config(c);
  }
  const RunConfig back = load_config_file(p.string());
  CHECK(render_config(back) == render_config(c));
  std::filesystem::remove(p);
  CHECK_THROWS_AS(load_config_file(p.string()), IoError);
  // Every key is rendered.
  const std::string r = render_config(RunConfig{});
  for (const auto& k : config_keys()) CHECK(r.find(k + "=") != std::string::npos);
}
