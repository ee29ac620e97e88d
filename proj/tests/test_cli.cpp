#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mobsamp/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mobsamp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(MOBSAMP_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mobsamp_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("mean width of the unit cube in three dimensions") {
    const auto r = run({"mean-width", "--config", config("cube3.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("mean_width = 3.000000 ±") != std::string::npos);
  }

  TEST_CASE("certify exit codes follow the verdict") {
    const auto out = scratch("certify");
    const auto ok = run({"certify", "--config", config("two_families.json"), "--out", out.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict = CERTIFIED") != std::string::npos);
    CHECK(fs::exists(out / "certify_report.txt"));
    CHECK(fs::exists(out / "certify.csv"));
    const auto no = run({"certify", "--config", config("two_families_K1.json")});
    CHECK(no.code == 2);
    CHECK(no.out.find("NOT-CERTIFIED") != std::string::npos);
    fs::remove_all(out);
  }

  TEST_CASE("CSV output is deterministic and carries provenance") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(run({"jensen", "--config", config("ball.json"), "--out", a.string()}).code == 0);
    REQUIRE(run({"jensen", "--config", config("ball.json"), "--out", b.string(), "--threads", "2"}).code == 0);
    const std::string x = slurp(a / "jensen.csv"), y = slurp(b / "jensen.csv");
    CHECK(x == y);
    std::istringstream lines(x);
    std::string header, comment;
    std::getline(lines, header);
    std::getline(lines, comment);
    CHECK(header == "function,r,zeros,lhs,rhs,pass");
    CHECK(comment.rfind("# tool=mobsamp version=1.0.0", 0) == 0);
    CHECK(comment.find("seed=7") != std::string::npos);
    CHECK(comment.find("config_hash=0x") != std::string::npos);
    CHECK(x.find('\r') == std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("seed override changes the hash and the output") {
    const auto a = run({"ronkin", "--config", config("ball.json"), "--budget-scale", "0.1"});
    const auto b = run({"ronkin", "--config", config("ball.json"), "--budget-scale", "0.1", "--seed", "8"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out != b.out);
    CHECK(b.out.find("seed = 8") != std::string::npos);
  }

  TEST_CASE("malformed configs report line and field") {
    const auto syntax = write_temp("mobsamp_bad_syntax.json", "{\n  \"version\": \"mobsamp-config/1\",\n  \"seed\": 1\n  \"dimension\": 2\n}\n");
    const auto r1 = run({"mean-width", "--config", syntax});
    CHECK(r1.code == 1);
    CHECK(r1.err.find(":4:") != std::string::npos);

    const auto field = write_temp("mobsamp_bad_field.json",
                                  R"({"version": "mobsamp-config/1", "seed": 1, "dimension": 2,
                                      "spectrum": {"type": "ball", "parameters": {"radius": "big"}}})");
    const auto r2 = run({"mean-width", "--config", field});
    CHECK(r2.code == 1);
    CHECK(r2.err.find("spectrum.parameters.radius") != std::string::npos);

    const auto version = write_temp("mobsamp_bad_version.json", R"({"version": "other/2", "seed": 1, "dimension": 2})");
    CHECK(run({"mean-width", "--config", version}).code == 1);

    const auto noseed = write_temp("mobsamp_no_seed.json", R"({"version": "mobsamp-config/1", "dimension": 2})");
    const auto r3 = run({"mean-width", "--config", noseed});
    CHECK(r3.code == 1);
    CHECK(r3.err.find("seed") != std::string::npos);

    const auto unknown = write_temp("mobsamp_unknown.json", R"({"version": "mobsamp-config/1", "seed": 1, "dimension": 2, "extra": 1})");
    CHECK(run({"mean-width", "--config", unknown}).code == 1);
  }

  TEST_CASE("usage errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"density"}).code == 1);
    CHECK(run({"density", "--config", "/nonexistent.json"}).code == 1);
  }

  TEST_CASE("selftest") {
    const auto r = run({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.out.find("all checks passed") != std::string::npos);
  }

  TEST_CASE("every subcommand runs on the shipped configs") {
    const std::pair<const char*, const char*> cases[] = {
        {"density", "two_families.json"}, {"phi-profile", "two_families.json"}, {"crofton", "unit_circle.json"},
        {"remez", "ball.json"},          {"section5", "section5.json"},         {"sampling-ratio", "two_families.json"},
    };
    for (const auto& [cmd, cfg] : cases) {
      INFO(cmd);
      const auto r = run({cmd, "--config", config(cfg), "--budget-scale", "0.1"});
      CHECK(r.code == 0);
      CHECK(r.err.empty());
    }
  }
}
