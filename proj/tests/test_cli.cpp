#include "rieff/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rieff;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  nlohmann::json summary;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  nlohmann::json j;
  const std::string s = out.str();
  if (!s.empty()) j = nlohmann::json::parse(s.substr(0, s.find('\n')), nullptr, false);
  return {code, j, err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "rieff-cli-test";
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("welge") {
    const Run r = run({"welge"});
    CHECK(r.code == 0);
    CHECK(r.summary["command"] == "welge");
    CHECK(r.summary["status"] == "ok");
    CHECK(std::abs(r.summary["l1"].get<double>() - (1 - std::sqrt(0.5))) < 1e-15);
    CHECK(std::abs(r.summary["l3"].get<double>() - (1 - std::sqrt(2.0 / 3.0))) < 1e-15);
    CHECK(r.summary["ordered"] == true);
  }

  TEST_CASE("riemann with a profile") {
    const fs::path prof = scratch("wag.csv"), doc = scratch("wag.json");
    const Run r = run({"riemann", "--left", "0.5,0.5", "--right", "0,0", "--profile", prof.string(), "--out",
                       doc.string(), "--samples", "50"});
    CHECK(r.code == 0);
    CHECK(r.summary["valid"] == true);
    const std::string csv = slurp(prof);
    CHECK(csv.rfind("xi,u1,u2,u3\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
    const auto j = nlohmann::json::parse(slurp(doc));
    CHECK(j["slow_group"].size() == 2);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run({"eff", "--ref", "0.5,0.5", "--bogus", "1"}).code == 2);
    CHECK(run({"nosuchcommand"}).code == 2);

    const Run missing = run({"eff", "--ref", "0.5,0.5", "--family", "slow", "--orientation", "forward"});
    CHECK(missing.code == 2);
    CHECK(missing.summary["status"] == "usage_error");
    CHECK(missing.summary["message"].get<std::string>().find("--coord") != std::string::npos);

    CHECK(run({"eff", "--ref", "0.5", "--family", "slow", "--orientation", "forward", "--coord", "u3"}).code == 2);
    CHECK(run({"eff", "--ref", "0.5,0.5", "--family", "medium", "--orientation", "forward", "--coord", "u3"}).code ==
          2);

    const fs::path cfg = scratch("bad.json");
    std::ofstream(cfg) << R"({"A": 1, "colour": "red"})";
    CHECK(run({"welge", "--config", cfg.string()}).code == 2);
    std::ofstream(cfg) << R"({"tolerances": {"eps_rh": 0}})";
    CHECK(run({"welge", "--config", cfg.string()}).code == 2);
    std::ofstream(cfg) << R"({"tolerances": {"eps_made_up": 1e-3}})";
    CHECK(run({"welge", "--config", cfg.string()}).code == 2);
  }

  TEST_CASE("numerical errors exit with 3 and name the error") {
    const Run r = run({"hugoniot", "--ref", "0.8,0.5"});
    CHECK(r.code == 3);
    CHECK(r.summary["status"] == "error");
    CHECK(r.summary["error"] == "DomainError");
    CHECK(run({"welge", "--A", "-1"}).code == 3);
  }

  TEST_CASE("flags override the config file") {
    const fs::path cfg = scratch("abc.json");
    std::ofstream(cfg) << R"({"A": 2.0, "B": 1.0, "C": 1.0})";
    const Run a = run({"welge", "--config", cfg.string()});
    CHECK(std::abs(a.summary["l1"].get<double>() - (1 - std::sqrt(1.0 / 3.0))) < 1e-15);
    const Run b = run({"welge", "--config", cfg.string(), "--A", "1"});
    CHECK(std::abs(b.summary["l1"].get<double>() - (1 - std::sqrt(0.5))) < 1e-15);
  }

  TEST_CASE("parsers") {
    CHECK(parse_state(" 0.25, 0.5") == State{0.25, 0.5});
    CHECK_THROWS_AS(parse_state("0.2,x"), UsageError);
    CHECK(parse_family("f") == Family::fast);
    CHECK(parse_orientation("bwd") == Orientation::backward);
    const ParamCoordinate c = parse_coord("1,-1,-1");
    CHECK(c.alpha0 == 1.0);
    CHECK(c.alpha2 == -1.0);
    const RunConfig rc = parse_config(R"({"ref": [0.1, 0.2], "coord": "u2", "N": 64})");
    CHECK(rc.ref == State{0.1, 0.2});
    CHECK(rc.coord->alpha2 == 1.0);
    CHECK(rc.N == 64);
    CHECK_THROWS_AS(parse_config(R"({"N": 6.5})"), UsageError);
    CHECK_THROWS_AS(parse_config("[1,2]"), UsageError);
  }

  TEST_CASE("eff output is byte-identical across runs") {
    const fs::path a = scratch("eff_a.csv"), b = scratch("eff_b.csv");
    for (const auto& p : {a, b}) {
      const Run r = run({"eff", "--ref", "0,0", "--family", "slow", "--orientation", "backward", "--coord", "u3",
                         "--direction", "1,1", "--out", p.string()});
      REQUIRE(r.code == 0);
      CHECK(r.summary["breakpoints"].size() == 1);
    }
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }

  TEST_CASE("simulate and rarefaction subcommands") {
    const Run s = run({"simulate", "--left", "1,0", "--right", "0,0", "--N", "100", "--compare"});
    CHECK(s.code == 0);
    CHECK(s.summary["l1"].get<double>() < 0.1);
    CHECK(s.summary["clamp_events"] == 0);
    const Run r = run({"rarefaction", "--ref", "0.6,0", "--family", "fast", "--orientation", "forward"});
    CHECK(r.code == 0);
    CHECK(r.summary["stop"] == "inflection");
  }
}
