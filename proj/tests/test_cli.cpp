#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "nlflux/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nlflux::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nlflux_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("profile reports the matching constant") {
  const Run r = run({"profile", "--p", "1.75"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["command"] == "profile");
  CHECK(doc["version"] == nlflux::cli::kVersion);
  CHECK(doc["config"]["p"] == 1.75);
  CHECK(doc["results"]["exists"] == true);
  CHECK(doc["results"]["c"].get<double>() > 0);

  const Run none = run({"profile", "--p", "2.2"});
  REQUIRE(none.code == 0);
  CHECK(json::parse(none.out)["results"]["exists"] == false);
}

TEST_CASE("invalid configuration exits 2 before writing") {
  const fs::path out = scratch("never.json");
  fs::remove(out);
  CHECK(run({"solve", "--N", "-4", "--out", out.string()}).code == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(run({"profile", "--p", "abc"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);

  const fs::path cfg = scratch("bad.json");
  write(cfg, R"({"p": 1.75, "bogus": 3})");
  CHECK(run({"profile", "--config", cfg.string()}).code == 2);
  write(cfg, R"({"command": "solve", "p": 1.75})");
  CHECK(run({"profile", "--config", cfg.string()}).code == 2);
  write(cfg, "{ not json");
  CHECK(run({"profile", "--config", cfg.string()}).code == 2);
}

TEST_CASE("I/O failures exit 4") {
  CHECK(run({"profile", "--config", scratch("missing.json").string()}).code == 4);
  CHECK(run({"spectrum", "--n", "256", "--out", "/nonexistent-dir/x.json"}).code == 4);
}

TEST_CASE("identical configs give byte-identical output") {
  const fs::path cfg = scratch("solve.json");
  write(cfg, R"({"command": "solve", "p": 1.6, "N": 64, "T": 0.5, "nu_mass": 0.5, "mu_atom": 0.2})");
  const fs::path a = scratch("a.json"), b = scratch("b.json");
  REQUIRE(run({"solve", "--config", cfg.string(), "--out", a.string()}).code == 0);
  REQUIRE(run({"solve", "--config", cfg.string(), "--out", b.string(), "--workers", "3"}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(json::parse(slurp(a))["config"]["N"] == 64);
}

TEST_CASE("csv output") {
  const Run r = run({"spectrum", "--n", "256", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# {", 0) == 0);
  CHECK(json::parse(line.substr(2))["command"] == "spectrum");
  std::getline(in, line);
  CHECK(line == "bc,index,eigenvalue");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("installed binary") {
  const char* exe = std::getenv("NLFLUX_CLI");
  if (!exe) return;
  const std::string base = std::string("\"") + exe + "\"";
  CHECK(WEXITSTATUS(std::system((base + " --version > /dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((base + " profile --p 0.9 > /dev/null 2>&1").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((base + " profile --p 1.8 --format csv > /dev/null").c_str())) == 0);
}
