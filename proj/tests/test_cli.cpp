#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lms/io.hpp"
#include "lms/random.hpp"

using namespace lms;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LMS_CLI_PATH) + " " + args + " 2>/tmp/lms_cli_stderr";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string stderr_text() {
  std::ifstream in("/tmp/lms_cli_stderr");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("lms_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const char* kFive = "x1,y\n1,0\n1,1\n1,4\n1,5\n1,9\n";

}  // namespace

TEST_CASE("generate writes the generator's instance and round-trips") {
  const auto r = run("generate --n 12 --p 3 --outliers 0.25 --seed 7");
  REQUIRE(r.status == 0);
  GeneratorConfig cfg;
  cfg.n = 12;
  cfg.p = 3;
  cfg.outlier_fraction = 0.25;
  cfg.seed = 7;
  const auto inst = generate_instance(cfg);
  std::ostringstream expected;
  io::write_csv(expected, inst.data);
  CHECK(r.out == expected.str());
  std::istringstream in(r.out);
  const auto back = io::read_csv(in);
  CHECK(back.x() == inst.data.x());
  CHECK(back.y() == inst.data.y());
  CHECK(run("generate --n 12 --p 3 --outliers 0.25 --seed 7").out == r.out);
  CHECK(run("generate --n 12 --p 3 --outliers 0.25 --seed 8").out != r.out);
}

TEST_CASE("generate rejects n < 2p") {
  CHECK(run("generate --n 5 --p 3").status == 2);
  CHECK(run("generate --n 10 --p 2 --outliers 0.5").status == 2);
}

TEST_CASE("fit reports the exact optimum with the full minimax fit") {
  const auto path = write_temp("five.csv", kFive);
  const auto r = run("fit " + path);
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(2));
  CHECK(j["k"] == 2);
  CHECK(j["h"] == 3);
  CHECK(j["schema_version"] == io::kReportSchemaVersion);
  CHECK(j.contains("minimax_full"));
  CHECK_FALSE(j.contains("profile"));
  const auto plane = write_temp("plane.csv", run("generate --n 6 --p 2 --seed 1").out);
  CHECK(run("fit " + plane + " --profile").status == 2);
  for (const char* algorithm : {"brute-force", "bpb", "greedy"}) {
    const auto other = run("fit " + path + " --algorithm " + algorithm);
    REQUIRE(other.status == 0);
    CHECK(nlohmann::json::parse(other.out)["value"].get<double>() >= 2 - 1e-9);
  }
  CHECK(run("fit " + path + " --output csv").out.rfind("optimizer,value,value_squared,", 0) == 0);
  CHECK(run("fit " + path + " --output human").status == 0);
}

TEST_CASE("fit output is byte-identical across runs and thread counts") {
  const auto data = run("generate --n 12 --p 2 --outliers 0.2 --seed 11");
  const auto path = write_temp("gen.csv", data.out);
  for (const char* algorithm : {"exhaustive", "bpb", "greedy"}) {
    const auto base = "fit " + path + " --algorithm " + algorithm + " --seed 5";
    const auto a = run(base);
    REQUIRE(a.status == 0);
    CHECK(run(base).out == a.out);
    CHECK(run(base + " --threads 3").out == a.out);
  }
}

TEST_CASE("fit --profile emits the one-dimensional objective") {
  const auto path = write_temp("line.csv", "x1,y\n1.1,2.3\n-0.7,0.4\n2.9,5.2\n0.3,3.3\n-1.6,-2.9\n");
  const auto r = run("fit " + path + " --profile");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["profile"].size() > 2);
  double lowest = 1e300;
  for (const auto& pt : j["profile"]) lowest = std::min(lowest, pt["value"].get<double>());
  CHECK(lowest == doctest::Approx(j["value"].get<double>()));
  CHECK(run("fit " + path + " --profile --output csv").out.find("theta,value") != std::string::npos);
}

TEST_CASE("enumerate-minima lists C(p+k, p) minima") {
  const auto path = write_temp("gen9.csv", run("generate --n 9 --p 2 --seed 3").out);
  for (int k = 0; k <= 6; ++k) {
    const auto r = run("enumerate-minima " + path + " --k " + std::to_string(k));
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["warnings"].empty());
    CHECK(j["count"] == j["theory_count"]);
    CHECK(j["minima"].size() == j["count"].get<std::size_t>());
  }
  CHECK(run("enumerate-minima " + path + " --k 7").status == 3);
  CHECK(run("enumerate-minima " + path + " --output csv").out.rfind("rank,k,value,", 0) == 0);
}

TEST_CASE("verify-theorem exits 0 when all counts match") {
  const auto r = run("verify-theorem --trials 4 --seed 2 --output json");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["all_match"] == true);
  CHECK(j["trials"].size() == 4);
  CHECK(run("verify-theorem --trials 2 --p 1 --n 5 --output csv").status == 0);
  CHECK(run("verify-theorem --p 3 --n 3").status == 2);
}

TEST_CASE("exit codes for malformed input and invariant violations") {
  CHECK(run("fit " + write_temp("bad.csv", "x1,y\n1,abc\n")).status == 2);
  CHECK(run("fit " + write_temp("hdr.csv", "a,b\n1,2\n")).status == 2);
  CHECK(run("fit /nonexistent/file.csv").status == 2);
  CHECK(run("fit").status == 2);
  CHECK(run("fit x.csv --algorithm nope").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("--help").status == 0);

  const auto dependent = write_temp("dep.csv", "x1,x2,y\n1,2,1\n1,2,0\n1,2,3\n1,2,2\n");
  CHECK(run("fit " + dependent).status == 3);
  CHECK(stderr_text().find("x2") != std::string::npos);

  const auto narrow = write_temp("narrow.csv", "x1,x2,y\n1,1,0\n1,2,1\n1,3,4\n");
  CHECK(run("fit " + narrow).status == 3);

  const auto path = write_temp("five.csv", kFive);
  CHECK(run("fit " + path + " --k 4").status == 3);
  CHECK(run("fit " + write_temp("nan.csv", "x1,y\n1,nan\n2,1\n")).status != 0);
}
