#include "doctest.h"

#include "nhb/commands.hpp"
#include "nhb/config.hpp"
#include "nhb/errors.hpp"

#include "json.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("nhb_test_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NHB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool equal(const nhb::RunConfig& a, const nhb::RunConfig& b) {
  return nhb::emit_config(a) == nhb::emit_config(b);
}

} // namespace

TEST_CASE("emitted configuration parses back to itself") {
  nhb::RunConfig c;
  c.model.p = 0.1 + 0.2; // not exactly representable in short decimal
  c.model.gamma_C = 1.0 / 3.0;
  c.seed = 18446744073709551615ull;
  c.evolve.start = "pair";
  c.sweep.grid.gamma.points = 17;
  const nhb::RunConfig back = nhb::parse_config_text(nhb::emit_config(c));
  CHECK(back.model.p == c.model.p);
  CHECK(back.model.gamma_C == c.model.gamma_C);
  CHECK(back.seed == c.seed);
  CHECK(back.evolve.start == "pair");
  CHECK(back.sweep.grid.gamma.points == 17);
  CHECK(equal(back, c));
}

TEST_CASE("partial files keep defaults") {
  const nhb::RunConfig c = nhb::parse_config_text("[model]\np = 0.81\ngamma_C = 0.75\n");
  CHECK(c.model.p == 0.81);
  CHECK(c.model.gamma_C == 0.75);
  CHECK(c.model.g1 == nhb::RunConfig{}.model.g1);
}

TEST_CASE("malformed configurations are rejected") {
  CHECK_THROWS_AS(nhb::parse_config_text("[model]\nq = 1\n"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::parse_config_text("[nonsense]\np = 1\n"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::parse_config_text("[model]\np = abc\n"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::parse_config_text("[model]\np = 1.0x\n"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::parse_config_text("[model\np = 1\n"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::parse_config_text("[spectrum]\npoints = -3\n"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::load_config("/nonexistent/file.ini"), nhb::ConfigError);
}

TEST_CASE("overrides") {
  nhb::RunConfig c;
  nhb::apply_override(c, "model.p=0.81");
  nhb::apply_override(c, "evolve.start = top");
  CHECK(c.model.p == 0.81);
  CHECK(c.evolve.start == "top");
  CHECK_THROWS_AS(nhb::apply_override(c, "model.p"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::apply_override(c, "p=1"), nhb::ConfigError);
  CHECK_THROWS_AS(nhb::apply_override(c, "model.nothing=1"), nhb::ConfigError);
}

TEST_CASE("validation") {
  nhb::RunConfig c;
  CHECK_NOTHROW(nhb::validate(c));
  c.model.gamma_C = -1.0;
  CHECK_THROWS_AS(nhb::validate(c), nhb::ConfigError);
  c = {};
  c.evolve.dt = 0.05;
  CHECK_THROWS_AS(nhb::validate(c), nhb::ConfigError);
  c = {};
  c.sweep.grid.p.points = 1;
  CHECK_THROWS_AS(nhb::validate(c), nhb::ConfigError);
  c = {};
  c.evolve.start = "sideways";
  CHECK_THROWS_AS(nhb::validate(c), nhb::ConfigError);
}

TEST_CASE("outputs carry a header that reproduces the run") {
  Scratch s;
  nhb::RunConfig c;
  c.model.gamma_C = 0.75;
  c.model.p = 0.81;
  const auto r = nhb::run_command("steady", c, s.path("steady.csv"));
  REQUIRE(r.exit_code == nhb::kExitOk);
  REQUIRE(r.files.size() == 1);
  const std::string first = slurp(r.files[0]);
  CHECK(first.rfind("# nhb steady\n", 0) == 0);
  CHECK(first.find("x,n_X,n_C,phi_CX,energy,branch,stability,residual\n") != std::string::npos);

  std::ifstream in(r.files[0]);
  const nhb::RunConfig back = nhb::parse_header(in);
  CHECK(equal(back, c));
  const auto again = nhb::run_command("steady", back, s.path("again"));
  CHECK(slurp(again.files[0]) == first);
}

TEST_CASE("every command writes its files") {
  Scratch s;
  nhb::RunConfig c;
  c.model.gamma_C = 0.75;
  c.model.p = 0.81;
  c.sweep.grid.gamma.points = 20;
  c.sweep.grid.p.points = 20;
  c.cut.samples = 200;
  c.evolve.start = "pair";
  c.evolve.t_end = 600.0;
  for (const std::string& name : nhb::command_names()) {
    const auto r = nhb::run_command(name, c, s.path(name));
    CHECK_MESSAGE(r.exit_code == nhb::kExitOk, name, ": ", r.message);
    for (const std::string& f : r.files) {
      CHECK(fs::exists(f));
      if (f.size() > 5 && f.substr(f.size() - 5) == ".json") {
        const auto j = nlohmann::json::parse(slurp(f));
        CHECK(j.contains("_config"));
      }
    }
  }
  const auto j = nlohmann::json::parse(slurp(s.path("sweep.json")));
  CHECK(j["ep"][0] == 1.0);
  CHECK(j["ep"][1].get<double>() == doctest::Approx(1.06));
  CHECK(j["r_line"]["slope"] == 1.0);
  CHECK(j["transition"].is_array());
  const auto v = nlohmann::json::parse(slurp(s.path("evolve.json")));
  CHECK(v["kind"] == "Oscillating");
}

TEST_CASE("command line exit codes") {
  Scratch s;
  const std::string cfg = s.path("run.ini");
  const std::string text = "[model]\ngamma_C = 0.75\np = 0.81\n";
  spit(cfg, text);
  CHECK(run_cli("steady --config " + cfg + " --out " + s.path("a")) == 0);
  CHECK(fs::exists(s.path("a.csv")));
  CHECK(slurp(cfg) == text); // input is never rewritten
  CHECK(run_cli("nonsense") == 2);
  CHECK(run_cli("steady --config " + s.path("missing.ini")) == 2);
  spit(s.path("bad.ini"), "[model]\nfoo = 1\n");
  CHECK(run_cli("steady --config " + s.path("bad.ini") + " --out " + s.path("b")) == 2);
  CHECK(run_cli("steady --set model.g2=0 --out " + s.path("c")) == 2);
  // A bracket with no window: partial output, numerical failure.
  CHECK(run_cli("locate --set locate.et_gamma_min=1.7 --out " + s.path("d")) == 3);
  const auto j = nlohmann::json::parse(slurp(s.path("d.json")));
  CHECK(j["et"].is_null());
  CHECK(j["status"].get<std::string>().rfind("partial", 0) == 0);
}

TEST_CASE("command line seed and overrides reach the header") {
  Scratch s;
  CHECK(run_cli("evolve --seed 7 --set evolve.t_end=50 --out " + s.path("e")) == 0);
  std::ifstream in(s.path("e.csv"));
  const nhb::RunConfig c = nhb::parse_header(in);
  CHECK(c.seed == 7);
  CHECK(c.evolve.t_end == 50.0);
  CHECK_FALSE(fs::exists(s.path("e.json")));
}
