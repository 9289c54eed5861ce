#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json doc() const { return Json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "svgeom");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = svgeom::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "svgeom_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("reach of a Segre-Veronese space") {
  const Outcome r = invoke({"reach", "--degrees", "2,3", "--dims", "1,1"});
  REQUIRE(r.code == 0);
  const Json j = r.doc();
  CHECK(j.at("reach").get<double>() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(j.at("regime") == "bottleneck-limited");
  CHECK(j.at("config").at("seed") == 42);
  CHECK(j.at("config").at("space").at("degrees") == Json({2, 3}));
}

TEST_CASE("matching sum for the Segre example") {
  const Outcome r = invoke({"dd", "--dims", "2,2,1,1", "--degrees", "1,1,1,1"});
  REQUIRE(r.code == 0);
  const Json j = r.doc();
  CHECK(j.at("D").get<double>() == -10.0);
  CHECK(j.at("profile") == "def-d");
  CHECK(j.contains("matching_count"));
}

TEST_CASE("every subcommand reports its configuration") {
  const std::vector<std::vector<std::string>> cases{
      {"reach", "--dims", "2", "--degrees", "3"},
      {"curvature", "--dims", "1,1", "--degrees", "2,3"},
      {"curvature", "--dims", "1,1", "--degrees", "2,3", "--theta", "0.6,0.8"},
      {"weingarten", "--dims", "1,1", "--degrees", "2,1"},
      {"weingarten", "--dims", "2", "--degrees", "2", "--sampler", "direct", "--scale-convention", "corollary"},
      {"dd", "--dims", "2,1,1", "--profile", "weingarten"},
      {"minors", "--dims", "2", "--degrees", "2", "--i", "1"},
      {"tube", "--dims", "1", "--degrees", "2", "--epsilon", "0.3", "--exponent-convention", "paper"},
      {"mc-det", "--dims", "2,2", "--degrees", "2,2", "--samples", "500"},
      {"mc-tube", "--dims", "1", "--degrees", "2", "--epsilon", "0.3", "--samples", "500"},
  };
  for (const auto& args : cases) {
    CAPTURE(args.front());
    const Outcome r = invoke(args);
    REQUIRE(r.code == 0);
    const Json j = r.doc();
    REQUIRE(j.contains("config"));
    CHECK(j.at("config").contains("seed"));
    CHECK(j.at("config").at("subcommand") == args.front());
  }
}

TEST_CASE("tube conventions and files") {
  const fs::path json = scratch("tube.json");
  const fs::path csv = scratch("terms.csv");
  const Outcome r = invoke({"tube", "--dims", "1,1", "--degrees", "1,1", "--epsilon", "0.2", "--json", json.string(),
                            "--csv", csv.string()});
  REQUIRE(r.code == 0);
  const Json j = r.doc();
  CHECK(j.at("volume").get<double>() == doctest::Approx(2 * std::numbers::pi * std::numbers::pi * std::sin(0.4)));
  CHECK(j.at("conventions").at("exponent") == "corrected");
  CHECK(j.at("conventions").at("minor_mode") == "corrected");
  CHECK(Json::parse(slurp(json)) == j);
  CHECK(slurp(csv).rfind("i,a_i,J_i,contribution\n", 0) == 0);
}

TEST_CASE("mc-det histogram output") {
  const fs::path csv = scratch("hist.csv");
  const Outcome r = invoke({"mc-det", "--dims", "2,1,1", "--degrees", "2,2,2", "--samples", "2000", "--out",
                            csv.string(), "--seed", "9"});
  REQUIRE(r.code == 0);
  CHECK(r.doc().at("seed") == 9);
  std::istringstream lines(slurp(csv));
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == 101);
}

TEST_CASE("seed from the environment") {
  ::setenv("SVGEOM_SEED", "1234", 1);
  const Outcome a = invoke({"weingarten", "--dims", "2", "--degrees", "3"});
  const Outcome b = invoke({"weingarten", "--dims", "2", "--degrees", "3", "--seed", "1234"});
  const Outcome c = invoke({"weingarten", "--dims", "2", "--degrees", "3", "--seed", "1"});
  ::setenv("SVGEOM_SEED", "abc", 1);
  const Outcome bad = invoke({"weingarten", "--dims", "2", "--degrees", "3"});
  ::unsetenv("SVGEOM_SEED");
  REQUIRE(a.code == 0);
  CHECK(a.doc().at("config").at("seed") == 1234);
  CHECK(a.doc().at("matrix") == b.doc().at("matrix"));
  CHECK(a.doc().at("matrix") != c.doc().at("matrix"));
  CHECK(bad.code == svgeom::cli::usage_error);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == svgeom::cli::usage_error);
  CHECK(invoke({"nonsense"}).code == svgeom::cli::usage_error);
  CHECK(invoke({"reach", "--dims", "1,1", "--degrees", "2"}).code != 0);
  CHECK(invoke({"tube", "--dims", "1", "--degrees", "2", "--epsilon", "0.3", "--profile", "bogus"}).code ==
        svgeom::cli::usage_error);
  CHECK(invoke({"reach", "--dims", "0", "--degrees", "2"}).code == svgeom::cli::domain_error);
  CHECK(invoke({"tube", "--dims", "2", "--degrees", "1", "--epsilon", "0.1"}).code == svgeom::cli::domain_error);
  CHECK(invoke({"tube", "--dims", "1", "--degrees", "2", "--epsilon", "2"}).code == svgeom::cli::domain_error);
  CHECK(invoke({"mc-tube", "--dims", "2", "--degrees", "4", "--epsilon", "0.1", "--samples", "10"}).code ==
        svgeom::cli::resource_error);
  const Outcome help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("tube") != std::string::npos);
}

TEST_CASE("selftest runs the acceptance suite") {
  const fs::path dir = scratch("artifacts");
  const Outcome r = invoke({"selftest", "--csv", dir.string()});
  CHECK(r.code == 0);
  const Json j = r.doc();
  CHECK(j.at("passed") == true);
  CHECK(j.at("criteria").size() == 9);
  CHECK(fs::exists(dir / "mc_det_histogram.csv"));
}
