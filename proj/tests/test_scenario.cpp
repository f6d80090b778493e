#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "scenario.hpp"

using namespace wci;

namespace {

std::string golden_path(const std::string &name) {
  std::string file = name;
  for (char &c : file)
    if (c == '+') c = '_';
  return std::string(WCI_GOLDEN_DIR) + "/" + file + ".json";
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const std::string &text) {
  try {
    parse_scenario(text);
  } catch (const Error &e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("builtin registry lists six scenarios") {
  const auto names = builtin_scenario_names();
  REQUIRE(names.size() == 6);
  for (const auto &n : names) {
    CAPTURE(n);
    const auto c = builtin_scenario(n);
    CHECK(c.name == n);
    CHECK_NOTHROW(c.validate());
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), Error);
}

TEST_CASE("builtin coefficients agree with independent transcription") {
  CHECK(builtin_scenario("model0").population == fx::model0());
  CHECK(builtin_scenario("model0+impulses").population == fx::model0());
  CHECK(builtin_scenario("3states").population == fx::three_states());
  CHECK(builtin_scenario("periodic").population == fx::oscillator());
  const auto c = builtin_scenario("coupled");
  CHECK(c.population == fx::three_states());
  REQUIRE(c.passive.has_value());
  CHECK(*c.passive == fx::oscillator());
  const auto rc = builtin_scenario("rc");
  CHECK(rc.rc.resistance == 1.0);
  CHECK(rc.rc.capacitance == 0.1);
  CHECK(rc.rc.current == 1.0);
}

TEST_CASE("builtin impulse instants") {
  const auto m = builtin_scenario("model0+impulses").schedule();
  REQUIRE(m.theta_instants.size() == 20);
  REQUIRE(m.eta_instants.size() == 20);
  for (int i = 1; i <= 20; ++i) {
    CHECK(m.theta_instants[i - 1] == doctest::Approx(2.0 * i / 3.0).epsilon(1e-15));
    CHECK(m.eta_instants[i - 1] == doctest::Approx((2.0 * i - 1) / 3.0).epsilon(1e-15));
  }
  const auto c = builtin_scenario("coupled").schedule();
  REQUIRE(c.theta_instants.size() == 50);
  CHECK(c.theta_instants.front() == doctest::Approx(6.95));
  CHECK(c.eta_instants.front() == doctest::Approx(5.95));
  CHECK(c.theta_instants.back() == doctest::Approx(104.95));
  CHECK(builtin_scenario("model0").schedule().empty());
}

TEST_CASE("coupled regimes select their initial states") {
  const auto r = builtin_scenario("coupled").sweep_regimes();
  REQUIRE(r.size() == 4);
  CHECK(r[0].mu == 1.0);
  REQUIRE(r[0].initial_states.size() == 2);
  CHECK(r[0].initial_states[0] == std::vector<double>{-0.01, 0.0, 0.17, 0.25});
  for (std::size_t k = 1; k < 4; ++k) CHECK(r[k].initial_states.size() == 3);
  CHECK(r[3].initial_states[2] == std::vector<double>{0.5, 0.5, 0.3, 0.3});
}

TEST_CASE("sweep regimes default to the mu x state product") {
  auto c = builtin_scenario("periodic");
  c.mu = {1.0, 0.5};
  c.initial_states = {{0.1, 0.1}, {0.2, 0.2}};
  const auto r = c.sweep_regimes();
  REQUIRE(r.size() == 2);
  CHECK(r[1].mu == 0.5);
  CHECK(r[1].initial_states.size() == 2);
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto &n : builtin_scenario_names()) {
    CAPTURE(n);
    const auto c = builtin_scenario(n);
    const std::string text = serialize_scenario(c);
    const auto back = parse_scenario(text);
    CHECK(back == c);
    CHECK(serialize_scenario(back) == text);
  }
}

TEST_CASE("golden serialized forms") {
  const bool update = std::getenv("WCI_UPDATE_GOLDEN") != nullptr;
  for (const auto &n : builtin_scenario_names()) {
    CAPTURE(n);
    const std::string text = serialize_scenario(builtin_scenario(n));
    if (update) {
      std::ofstream(golden_path(n), std::ios::binary) << text;
      continue;
    }
    CHECK(slurp(golden_path(n)) == text);
  }
}

TEST_CASE("golden files load back to the builtins") {
  for (const auto &n : builtin_scenario_names())
    CHECK(load_scenario_file(golden_path(n)) == builtin_scenario(n));
}

TEST_CASE("minimal files get defaults") {
  const auto c = parse_scenario(R"({
    "model": "wilson-cowan",
    "population": {"c1": 12, "c2": 4, "c3": 13, "c4": 11, "ke": 0.97, "ki": 0.98, "re": 1, "ri": 1,
                   "sigmoid_e": {"a": 1.2, "theta": 2.8}, "sigmoid_i": {"a": 1, "theta": 4}},
    "mu": [0.5], "initial_states": [[0.1, 0.2]], "horizon": 3
  })");
  CHECK(c.population == fx::model0());
  CHECK(c.classifier.projection.axes == std::vector<int>{0, 1});
  CHECK(c.schedule().empty());
  CHECK(c.solver == SolverConfig{});
}

TEST_CASE("jump maps by preset name or coefficient table") {
  const std::string head = R"({"model": "wilson-cowan", "mu": [1], "initial_states": [[0, 0]],
    "population": {"c1": 12, "c2": 4, "c3": 13, "c4": 11},
    "impulses": {"theta": {"list": [0.5]}, "eta": {"list": [0.25]}, )";
  const auto a = parse_scenario(head + R"("regular_jump": "swap-model0"}})");
  CHECK(a.regular_jump == jump_preset("swap-model0"));
  const auto b = parse_scenario(head + R"("regular_jump": {"E": {"alpha": 2, "power": [1, 1]}}}})");
  CHECK(b.regular_jump.E.alpha == 2);
  CHECK(b.regular_jump.I.is_zero());
  CHECK(code_of(head + R"("regular_jump": "bogus"}})") == ErrorCode::Config);
}

TEST_CASE("bad files are config errors") {
  CHECK(code_of("{") == ErrorCode::Config);
  CHECK(code_of("[]") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "rc", "initial_states": [[0]], "bogus": 1})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "rc", "initial_states": [[0]], "horizon": "x"})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "rc", "initial_states": [[0]], "horizon": -1})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "rc", "initial_states": [[0, 1]]})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "martian"})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "wilson-cowan", "mu": [0], "initial_states": [[0, 0]]})") ==
        ErrorCode::Config);
  CHECK(code_of(R"({"model": "wilson-cowan", "mu": [1], "initial_states": [[0, 0]],
                    "impulses": {"theta": {"list": [1, 1]}}})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "coupled", "mu": [1], "initial_states": [[0, 0, 0, 0]]})") ==
        ErrorCode::Config);
  CHECK(code_of(R"({"model": "wilson-cowan", "mu": [1], "initial_states": [[0, 0]],
                    "regimes": [{"mu": 1, "states": [3]}]})") == ErrorCode::Config);
  CHECK(code_of(R"({"model": "rc", "initial_states": [[0]], "rc": {"R": 0}})") ==
        ErrorCode::Config);
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/x.json"), Error);
}

TEST_CASE("system per mu") {
  const auto c = builtin_scenario("coupled");
  const System s = c.system(0.2);
  CHECK(s.dimension() == 4);
  CHECK(builtin_scenario("rc").system(1).dimension() == 1);
  CHECK(builtin_scenario("model0").system(0.3).dimension() == 2);
}
