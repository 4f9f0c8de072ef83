#include <doctest.h>

#include <sstream>

#include "lms/io.hpp"
#include "lms/random.hpp"
#include "support.hpp"

using namespace lms;

namespace {
ErrorCode code_of(const std::string& text) {
  std::istringstream in(text);
  try {
    io::read_csv(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("input accepted: " << text);
  return ErrorCode::domain;
}
}  // namespace

TEST_CASE("read_csv parses the documented schema") {
  std::istringstream in("x1,x2,y\r\n1, 0.5 ,2\n1,-1e-3,+4\n\n1,2,3\n");
  const auto data = io::read_csv(in);
  CHECK(data.n() == 3);
  CHECK(data.p() == 2);
  CHECK(data.x()(1, 1) == -1e-3);
  CHECK(data.response(1) == 4);
}

TEST_CASE("read_csv rejects malformed input") {
  CHECK(code_of("") == ErrorCode::parse);
  CHECK(code_of("y\n1\n") == ErrorCode::parse);
  CHECK(code_of("x2,y\n1,2\n") == ErrorCode::parse);
  CHECK(code_of("x1,z\n1,2\n") == ErrorCode::parse);
  CHECK(code_of("x1,y\n1,abc\n") == ErrorCode::parse);
  CHECK(code_of("x1,y\n1,2,3\n") == ErrorCode::parse);
  CHECK(code_of("x1,y\n1,2.5x\n") == ErrorCode::parse);
  CHECK(code_of("x1,y\n") == ErrorCode::parse);
  // Well-formed but violating the dataset invariants.
  CHECK(code_of("x1,x2,y\n1,2,0\n2,4,1\n3,6,2\n") == ErrorCode::invalid_dataset);
}

TEST_CASE("generated instances survive a CSV round trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.n = 6 + seed % 7;
    config.p = 1 + seed % 3;
    config.outlier_fraction = 0.3;
    const auto inst = generate_instance(config);
    std::ostringstream out;
    io::write_csv(out, inst.data);
    std::istringstream in(out.str());
    const auto back = io::read_csv(in);
    CHECK(back.x() == inst.data.x());
    CHECK(back.y() == inst.data.y());
  }
}

TEST_CASE("format_real is the shortest round-trip text") {
  CHECK(io::format_real(0.1) == "0.1");
  CHECK(io::format_real(2.0) == "2");
  CHECK(io::format_real(-3.6) == "-3.6");
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * 1e3;
    CHECK(std::stod(io::format_real(v)) == v);
  }
}

TEST_CASE("report JSON carries the schema version and one-based indices") {
  SolverReport report;
  report.value = 2;
  CandidateFit fit;
  fit.theta = test::vec({2});
  fit.rho = 2;
  fit.active = IndexSet{0, 2};
  fit.eps = {-1, 1};
  fit.lambda = {0.5, 0.5};
  report.optimizers.push_back(fit);
  const auto j = io::to_json(report);
  CHECK(j["schema_version"] == io::kReportSchemaVersion);
  CHECK(j["value_squared"] == 4.0);
  CHECK(j["optimizers"][0]["active"] == nlohmann::json({1, 3}));
}
