#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deadend/cli.hpp"

using namespace deadend;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "deadend");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json without_timing(Json j) {
  j.erase("timing");
  return j;
}

std::filesystem::path scratch(const char* name) {
  auto p = std::filesystem::temp_directory_path() / "deadend_cli_test";
  std::filesystem::create_directories(p);
  return p / name;
}

}  // namespace

TEST_CASE("depth command") {
  const auto r = run_cli({"depth", "--group", "zz", "--gens", "1", "--element", "5", "--radius", "10"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["results"]["depth"]["text"] == "1");
  CHECK(j["results"]["norm"] == "5");
  CHECK(j["schema"] == "deadend/1");
  CHECK(j["command"] == "depth");

  const auto grown = run_cli({"depth", "--group", "cyclic:10", "--gens", "1", "--element", "5"});
  REQUIRE(grown.code == 0);
  CHECK(grown.json()["results"]["depth"]["kind"] == "infinite");
}

TEST_CASE("diameter command") {
  const auto r = run_cli({"diameter", "--group", "cyclic:10", "--gens", "1"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["results"]["diameter"] == "5");
  CHECK(j["results"]["witness"] == "5");
}

TEST_CASE("construct command") {
  const auto r = run_cli({"construct", "--group", "zz", "--gens", "1", "--quotient", "cyclic:10", "--target-depth", "3"});
  REQUIRE(r.code == 0);
  const auto j = r.json()["results"];
  CHECK(j["params"]["n"] == "5");
  CHECK(j["params"]["N"] == "78");
  CHECK(j["params"]["d"] == "2");
  CHECK(j["params"]["bound_mode"] == "paper");
  CHECK(j["generating_set"]["size"] == "15");
  CHECK(j["witness"]["g_n"] == "5");
  CHECK(j["verification"]["certified_depth"] == "3");
  CHECK(j["passed"] == true);

  const auto tight = run_cli({"construct", "--group", "zz", "--gens", "1", "--quotient", "cyclic:10", "--target-depth",
                              "3", "--bound-mode", "tight"});
  REQUIRE(tight.code == 0);
  CHECK(tight.json()["results"]["params"]["N"] == "38");

  const auto family = run_cli({"construct", "--group", "zz", "--gens", "1", "--family", "cyclic", "--target-depth", "3"});
  REQUIRE(family.code == 0);
  CHECK(family.json()["results"]["quotient"]["order"] == "10");
}

TEST_CASE("construct with a word-based quotient") {
  const auto r = run_cli({"construct", "--group", "zz", "--gens", "1", "--quotient-target", "cyclic:10",
                          "--quotient-images", "1", "--target-depth", "3"});
  REQUIRE(r.code == 0);
  const auto j = r.json()["results"];
  CHECK(j["quotient"]["map"] == "words:cyclic:10");
  CHECK(j["generating_set"]["size"] == "15");
  CHECK(j["passed"] == true);
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> args{"construct", "--group",        "zz", "--gens", "1", "--quotient",
                                      "cyclic:10", "--target-depth", "3"};
  const auto a = run_cli(args), b = run_cli(args);
  CHECK(without_timing(a.json()).dump() == without_timing(b.json()).dump());
  const auto p1 = run_cli({"profile", "--group", "lamplighter", "--gens", "t,a", "--radius", "5"});
  const auto p2 = run_cli({"profile", "--group", "lamplighter", "--gens", "t,a", "--radius", "5"});
  CHECK(without_timing(p1.json()) == without_timing(p2.json()));
}

TEST_CASE("verify re-checks a stored report") {
  const auto path = scratch("construct.json").string();
  const auto r = run_cli({"construct", "--group", "zz", "--gens", "1", "--quotient", "cyclic:10", "--target-depth", "3",
                          "--bound-mode", "tight", "--out", path});
  REQUIRE(r.code == 0);
  const auto v = run_cli({"verify", "--input", path});
  CHECK(v.code == 0);
  CHECK(v.json()["results"]["results_match"] == true);

  Json stored;
  std::ifstream(path) >> stored;
  stored["results"]["generating_set"]["size"] = "16";
  std::ofstream(path) << stored.dump();
  const auto tampered = run_cli({"verify", "--input", path});
  CHECK(tampered.code == 4);
  CHECK(tampered.json()["results"]["first_difference"] == "/generating_set/size");
}

TEST_CASE("certify command") {
  const auto r = run_cli({"certify", "--group", "zz", "--gens", "1", "--quotient", "cyclic:10", "--target-depth", "3",
                          "--element", "27"});
  REQUIRE(r.code == 0);
  const auto j = r.json()["results"];
  CHECK(j["certificate"]["k"] == "3");
  CHECK(j["certificate"]["valid"] == true);
  CHECK(j["norm_A"] == "3");
}

TEST_CASE("ball, profile and csv output") {
  const auto csv = scratch("profile.csv").string();
  const auto r = run_cli({"profile", "--group", "cyclic:4", "--gens", "1", "--radius", "2", "--csv", csv});
  REQUIRE(r.code == 0);
  std::ifstream f(csv);
  std::stringstream text;
  text << f.rdbuf();
  CHECK(text.str() == "element,norm,depth\n0,0,1\n1,1,1\n3,1,1\n2,2,inf\n");

  const auto b = run_cli({"ball", "--group", "grid:2", "--gens", "[1,0],[0,1]", "--radius", "3"});
  REQUIRE(b.code == 0);
  CHECK(b.json()["results"]["sphere_sizes"] == Json::array({"1", "4", "8", "12"}));
}

TEST_CASE("config file with flag overrides") {
  const auto cfg = scratch("run.cfg");
  std::ofstream(cfg) << "# sweep settings\n"
                        "group = \"zz\"\n"
                        "gens = \"1\"\n"
                        "family = \"cyclic\"\n"
                        "max_m = 100000\n"
                        "target_depth = 3\n"
                        "bound_mode = \"paper\"\n";
  const auto r = run_cli({"construct", "--config", cfg.string(), "--bound-mode", "tight"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["results"]["params"]["N"] == "38");
  CHECK(j["inputs"]["max_m"] == "100000");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"depth", "--group", "zz", "--gens", "1"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"diameter", "--group", "zz", "--gens", "x"}).code == 2);
  CHECK(run_cli({"construct", "--group", "zz", "--gens", "1", "--quotient", "cyclic:8", "--target-depth", "3"}).code == 2);
  CHECK(run_cli({"ball", "--group", "grid:2", "--gens", "[1,0],[0,1]", "--radius", "50", "--budget-elements", "100"}).code ==
        3);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("cache directory") {
  const auto dir = scratch("cache");
  std::filesystem::remove_all(dir);
  const std::vector<std::string> args{"ball",   "--group",  "lamplighter", "--gens", "t,a",
                                      "--radius", "6", "--cache-dir", dir.string()};
  const auto a = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  const auto b = run_cli(args);
  CHECK(without_timing(a.json()) == without_timing(b.json()));
}
