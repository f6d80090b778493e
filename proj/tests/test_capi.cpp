// Exercises the shared library through its public header only.

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "wcimpulse/wcimpulse.h"

namespace {

struct Scn {
  wci_scenario *p = nullptr;
  ~Scn() { wci_scenario_free(p); }
};

std::string take(char *s) {
  std::string out = s ? s : "";
  wci_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("builtin names") {
  REQUIRE(wci_builtin_count() == 6);
  CHECK(std::string(wci_builtin_name(0)) == "rc");
  CHECK(wci_builtin_name(6) == nullptr);
  CHECK(std::string(wci_version()).size() > 0);
  CHECK(std::string(wci_status_name(WCI_E_CONFIG)) == "ConfigError");
}

TEST_CASE("errors come back as codes with a thread-local message") {
  Scn s;
  CHECK(wci_scenario_builtin("no-such", &s.p) == WCI_E_CONFIG);
  CHECK(s.p == nullptr);
  CHECK(std::string(wci_last_error()).find("no-such") != std::string::npos);
  CHECK(wci_scenario_parse("{", &s.p) == WCI_E_CONFIG);
  CHECK(wci_scenario_parse(nullptr, &s.p) == WCI_E_INVALID_ARGUMENT);
  CHECK(wci_scenario_load("/nonexistent.json", &s.p) == WCI_E_CONFIG);

  std::string other;
  std::thread([&] { other = wci_last_error(); }).join();
  CHECK(other.empty());

  REQUIRE(wci_scenario_builtin("model0", &s.p) == WCI_OK);
  CHECK(std::string(wci_last_error()).empty());
}

TEST_CASE("serialize and parse through the C layer") {
  Scn a, b;
  REQUIRE(wci_scenario_builtin("coupled", &a.p) == WCI_OK);
  CHECK(wci_scenario_dimension(a.p) == 4);
  char *text = nullptr;
  REQUIRE(wci_scenario_serialize(a.p, &text) == WCI_OK);
  const std::string first = take(text);
  REQUIRE(wci_scenario_parse(first.c_str(), &b.p) == WCI_OK);
  REQUIRE(wci_scenario_serialize(b.p, &text) == WCI_OK);
  CHECK(take(text) == first);
}

TEST_CASE("steady states of the three-equilibrium set") {
  Scn s;
  REQUIRE(wci_scenario_builtin("model0", &s.p) == WCI_OK);
  wci_steady_state buf[8];
  size_t n = 0;
  char *text = nullptr;
  REQUIRE(wci_steady_states(s.p, buf, 8, &n, &text) == WCI_OK);
  CHECK(take(text).find("total 3") != std::string::npos);
  REQUIRE(n == 3);
  CHECK(std::abs(buf[0].E) < 1e-9);
  CHECK(buf[0].hurwitz);
  CHECK(buf[0].jacobian[0] == doctest::Approx(-0.5468).epsilon(1e-3));
  CHECK(!buf[1].hurwitz);
  CHECK(buf[2].E == doctest::Approx(0.44234).epsilon(1e-4));

  size_t only = 0;
  CHECK(wci_steady_states(s.p, buf, 1, &only, nullptr) == WCI_OK);
  CHECK(only == 3);

  Scn rc;
  REQUIRE(wci_scenario_builtin("rc", &rc.p) == WCI_OK);
  CHECK(wci_steady_states(rc.p, buf, 8, &n, nullptr) == WCI_E_CONFIG);
}

TEST_CASE("verify summary") {
  Scn s;
  REQUIRE(wci_scenario_builtin("model0+impulses", &s.p) == WCI_OK);
  wci_run_options o;
  wci_run_options_init(&o);
  o.convergence = 1;
  wci_verify_summary v{};
  REQUIRE(wci_verify(s.p, &o, &v, nullptr) == WCI_OK);
  CHECK(v.c1_pass);
  CHECK(v.c2_pass);
  CHECK(v.c3_pass);
  CHECK(v.convergence_run);
  CHECK(v.convergence_pass);
  CHECK(v.all_pass);
  CHECK(!v.simulation_failed);

  Scn t;
  REQUIRE(wci_scenario_builtin("3states", &t.p) == WCI_OK);
  REQUIRE(wci_verify(t.p, nullptr, &v, nullptr) == WCI_OK);
  CHECK(!v.c2_pass);
  CHECK(!v.all_pass);
}

TEST_CASE("simulation samples and jump records agree") {
  Scn s;
  REQUIRE(wci_scenario_builtin("model0+impulses", &s.p) == WCI_OK);
  wci_trajectory *t = nullptr;
  REQUIRE(wci_simulate(s.p, nullptr, &t) == WCI_OK);
  const size_t n = wci_trajectory_sample_count(t);
  const size_t dim = wci_trajectory_dimension(t);
  REQUIRE(dim == 2);
  std::vector<double> times(n), x(n * dim);
  CHECK(wci_trajectory_samples(t, times.data(), x.data(), n) == n);
  REQUIRE(wci_trajectory_jump_count(t) == 40);
  // every jump appears as a pair of samples with equal t
  size_t k = 0;
  for (size_t j = 0; j < 40; ++j) {
    double tj = 0, pre[2], post[2];
    wci_jump_kind kind;
    REQUIRE(wci_trajectory_jump(t, j, &tj, &kind, pre, post) == WCI_OK);
    CHECK(kind == (j % 2 == 0 ? WCI_JUMP_SINGULAR : WCI_JUMP_REGULAR));
    while (k + 1 < n && !(times[k] == tj && times[k + 1] == tj)) ++k;
    REQUIRE(k + 1 < n);
    CHECK(std::abs(x[k * 2] - pre[0]) <= 1e-12);
    CHECK(std::abs(x[(k + 1) * 2] - post[0]) <= 1e-12);
    CHECK(std::abs(x[(k + 1) * 2 + 1] - post[1]) <= 1e-12);
    ++k;
  }
  CHECK(wci_trajectory_jump(t, 40, nullptr, nullptr, nullptr, nullptr) ==
        WCI_E_INVALID_ARGUMENT);
  CHECK(!wci_trajectory_failed(t, nullptr));
  char *csv = nullptr;
  REQUIRE(wci_trajectory_csv(t, &csv) == WCI_OK);
  CHECK(take(csv).rfind("t,E,I,e,i,segment,jump_kind\n", 0) == 0);
  wci_trajectory_free(t);
}

TEST_CASE("solver failures hand back the partial trajectory") {
  const char *json = R"({"model": "wilson-cowan", "mu": [1], "initial_states": [[-0.5, 0]],
    "population": {"c1": 12, "c2": 4, "c3": 13, "c4": 11, "ke": 0.97, "ki": 0.98,
                   "re": 1, "ri": 1, "sigmoid_e": {"a": 1.2, "theta": 2.8},
                   "sigmoid_i": {"a": 1, "theta": 4}},
    "impulses": {"eta": {"list": [0.2]}, "singular_jump": "singular-model0",
                 "negative_base": "reject"},
    "horizon": 1})";
  Scn s;
  REQUIRE(wci_scenario_parse(json, &s.p) == WCI_OK);
  wci_trajectory *t = nullptr;
  CHECK(wci_simulate(s.p, nullptr, &t) == WCI_E_DOMAIN);
  REQUIRE(t != nullptr);
  double when = 0;
  CHECK(wci_trajectory_failed(t, &when));
  CHECK(when == doctest::Approx(0.2));
  CHECK(wci_trajectory_sample_count(t) > 100);
  wci_trajectory_free(t);
}

TEST_CASE("sweep through the C layer") {
  Scn s;
  REQUIRE(wci_scenario_builtin("coupled", &s.p) == WCI_OK);
  wci_run_options o;
  wci_run_options_init(&o);
  o.has_mu = 1;
  o.mu = 1.0;
  const double x0[4] = {-0.01, 0, 0.17, 0.25};
  o.x0 = x0;
  o.x0_len = 4;
  wci_sweep *w = nullptr;
  REQUIRE(wci_sweep_run(s.p, &o, &w) == WCI_OK);
  REQUIRE(wci_sweep_regime_count(w) == 1);
  CHECK(wci_sweep_regime_mu(w, 0) == 1.0);
  const size_t nc = wci_sweep_component_count(w, 0);
  REQUIRE(nc >= 1);
  size_t total = 0;
  for (int c = WCI_CLASS_CYCLE; c <= WCI_CLASS_UNCLASSIFIED; ++c)
    total += wci_sweep_class_count(w, 0, static_cast<wci_class>(c));
  CHECK(total == nc);
  wci_component comp{};
  CHECK(wci_sweep_component(w, 0, 0, &comp) == WCI_OK);
  CHECK(comp.arc_count > 0);
  CHECK(wci_sweep_component(w, 0, nc, &comp) == WCI_E_INVALID_ARGUMENT);
  CHECK(wci_sweep_failed_cells(w) == 0);
  REQUIRE(wci_sweep_cell_count(w) == 1);
  char *name = nullptr, *csv = nullptr;
  REQUIRE(wci_sweep_cell_csv(w, 0, &name, &csv) == WCI_OK);
  CHECK(take(name) == "cell_r0_mu1_x0.csv");
  CHECK(take(csv).size() > 100);
  char *rep = nullptr;
  REQUIRE(wci_sweep_report(w, &rep) == WCI_OK);
  CHECK(take(rep).find("# counts") != std::string::npos);
  wci_sweep_free(w);
  CHECK(std::string(wci_class_name(WCI_CLASS_MEDUSA_WITHOUT_RING)) == "medusa-without-ring");
}

TEST_CASE("null handles are tolerated") {
  wci_scenario_free(nullptr);
  wci_trajectory_free(nullptr);
  wci_sweep_free(nullptr);
  wci_string_free(nullptr);
  CHECK(wci_scenario_dimension(nullptr) == 0);
  CHECK(wci_sweep_regime_count(nullptr) == 0);
  CHECK(wci_trajectory_sample_count(nullptr) == 0);
  CHECK(wci_simulate(nullptr, nullptr, nullptr) == WCI_E_INVALID_ARGUMENT);
  CHECK(wci_write_file_atomic(nullptr, "x", 1) == WCI_E_INVALID_ARGUMENT);
}
