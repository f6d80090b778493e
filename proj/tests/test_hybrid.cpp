#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "hybrid.hpp"

using namespace wci;

namespace {

ImpulseSchedule model0_schedule() {
  ImpulseSchedule s;
  for (int i = 1; i <= 20; ++i) {
    s.theta_instants.push_back(2.0 * i / 3.0);
    s.eta_instants.push_back((2.0 * i - 1) / 3.0);
  }
  s.regular_jump = jump_preset("swap-model0");
  s.singular_jump = jump_preset("singular-model0");
  return s;
}

State2 at(const Arc &a, std::size_t k) { return {a.state(k)[0], a.state(k)[1]}; }

}  // namespace

TEST_CASE("regular swap map exchanges the stable states") {
  const auto s = model0_schedule();
  const State2 a = apply_regular_jump(s, {0, 0});
  CHECK(a.E == doctest::Approx(0.44234));
  CHECK(a.I == doctest::Approx(0.22751));
  const State2 b = apply_regular_jump(s, {0.44234, 0.22751});
  CHECK(norm(b) < 1e-5);
  ImpulseSchedule id;
  CHECK(apply_regular_jump(id, {0.3, 0.7}) == State2{0.3, 0.7});
}

TEST_CASE("singular map vanishes at the origin") {
  const auto s = model0_schedule();
  for (double mu : {1.0, 0.1, 1e-3}) CHECK(norm(apply_singular_jump(s, {0, 0}, mu, mu)) == 0);
}

TEST_CASE("singular map at the upper stable state") {
  const auto s = model0_schedule();
  const long double mu = 0.1L, E = 0.44234L, I = 0.22751L;
  const long double dE =
      (-mu * std::sqrt(E) * (E - 0.44234L) * (E - 0.44234L) - std::sin(mu * mu) * I) / mu;
  const long double dI =
      (-mu * std::cbrt(I) * std::pow(I - 0.22751L, 3) - std::sin(mu * mu) * E) / mu;
  const State2 post = apply_singular_jump(s, {0.44234, 0.22751}, 0.1, 0.1);
  CHECK(post.E - 0.44234 == doctest::Approx(static_cast<double>(dE)).epsilon(1e-12));
  CHECK(post.I - 0.22751 == doctest::Approx(static_cast<double>(dI)).epsilon(1e-12));
  CHECK(post.E - 0.44234 == doctest::Approx(-0.02275).epsilon(1e-3));
  CHECK(post.I - 0.22751 == doctest::Approx(-0.04423).epsilon(1e-3));
}

TEST_CASE("singular map divides the raw values by the time constants") {
  const auto s = model0_schedule();
  const State2 x{0.3, 0.1};
  const State2 raw = singular_raw(s, x, 0.2, 0.5);
  const State2 post = apply_singular_jump(s, x, 0.2, 0.5);
  CHECK(post.E == doctest::Approx(x.E + raw.E / 0.2));
  CHECK(post.I == doctest::Approx(x.I + raw.I / 0.5));
  CHECK_THROWS_AS(apply_singular_jump(s, x, 0.0, 0.5), Error);
}

TEST_CASE("negative base under the square root") {
  auto s = model0_schedule();
  bool clamped = false;
  const State2 post = apply_singular_jump(s, {-0.01, 0.0}, 0.1, 0.1, &clamped);
  CHECK(clamped);
  CHECK(std::isfinite(post.E));
  apply_singular_jump(s, {-1e-12, 0.0}, 0.1, 0.1, &clamped);
  CHECK_FALSE(clamped);
  s.negative_base = NegativeBasePolicy::Reject;
  CHECK_THROWS_AS(apply_singular_jump(s, {-0.01, 0.0}, 0.1, 0.1), Error);
}

TEST_CASE("schedule validation") {
  ImpulseSchedule s;
  s.theta_instants = {1, 2};
  s.eta_instants = {2};
  CHECK_THROWS_AS(s.validate(), Error);
  s.eta_instants = {0};
  CHECK_THROWS_AS(s.validate(), Error);
  s.eta_instants = {1.5};
  s.theta_instants = {2, 1};
  CHECK_THROWS_AS(s.validate(), Error);
  s.theta_instants = {1, 2};
  CHECK_NOTHROW(s.validate());
  s.regular_jump = jump_preset("singular-model0");
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("hybrid run bookkeeping and right continuity") {
  const double mu = 0.1;
  const System sys = System::single(fx::model0(mu));
  const auto sched = model0_schedule();
  const std::vector<double> x0{0.25, 0.0};
  const auto traj = simulate(sys, sched, x0, 14.0, {});
  REQUIRE(traj.jumps.size() == 40);
  REQUIRE(traj.segments.size() == 41);
  for (std::size_t k = 0; k < traj.jumps.size(); ++k) {
    const JumpRecord &j = traj.jumps[k];
    const Arc &before = traj.segments[k];
    const Arc &after = traj.segments[k + 1];
    CHECK(before.t.back() == j.t);
    CHECK(after.t.front() == j.t);
    CHECK(at(before, before.size() - 1) == j.pre);
    CHECK(at(after, 0) == j.post);
    const State2 again = j.kind == JumpKind::Regular
                             ? apply_regular_jump(sched, j.pre)
                             : apply_singular_jump(sched, j.pre, mu, mu);
    CHECK(std::abs((j.post - j.pre).E - (again - j.pre).E) <= 1e-12);
    CHECK(std::abs((j.post - j.pre).I - (again - j.pre).I) <= 1e-12);
    for (std::size_t s = 1; s < after.size(); ++s) CHECK(after.t[s] > after.t[s - 1]);
  }
  CHECK(traj.jumps[0].kind == JumpKind::Singular);
  CHECK(traj.jumps[1].kind == JumpKind::Regular);
}

TEST_CASE("activity alternates between the stable states") {
  const System sys = System::single(fx::model0(0.1));
  const std::vector<double> x0{0.25, 0.0};
  const auto traj = simulate(sys, model0_schedule(), x0, 14.0, {});
  // Just before each regular instant the state sits near one of the two
  // stable states, alternating.
  int expect_high = 1;
  for (const auto &j : traj.jumps) {
    if (j.kind != JumpKind::Regular) continue;
    const State2 target = expect_high ? State2{0.44234, 0.22751} : State2{0, 0};
    CHECK(norm(j.pre - target) < 0.05);
    expect_high = 1 - expect_high;
  }
}

TEST_CASE("instants at or after the horizon are ignored") {
  const System sys = System::single(fx::model0(1.0));
  ImpulseSchedule s;
  s.theta_instants = {1.0, 2.0, 3.0};
  s.regular_jump = jump_preset("swap-model0");
  const std::vector<double> x0{0.1, 0.1};
  const auto traj = simulate(sys, s, x0, 2.0, {});
  CHECK(traj.jumps.size() == 1);
  CHECK(traj.segments.back().t.back() == 2.0);
}

TEST_CASE("empty schedule is a single integration") {
  const System sys = System::single(fx::model0(0.5));
  const std::vector<double> x0{0.25, 0.0};
  const auto traj = simulate(sys, ImpulseSchedule{}, x0, 3.0, {});
  REQUIRE(traj.segments.size() == 1);
  const Arc direct = integrate_segment(sys.field(), 0, 3.0, x0,
                                       SolverConfig{}.for_time_constant(0.5));
  CHECK(traj.segments[0].x == direct.x);
  CHECK(traj.jumps.empty());
}

TEST_CASE("coupled system keeps the passive pair untouched by jumps") {
  const System sys = System::coupled(fx::three_states(0.2), fx::oscillator());
  CHECK(sys.dimension() == 4);
  ImpulseSchedule s;
  s.theta_instants = {0.5};
  s.regular_jump = jump_preset("quadratic-3states");
  const std::vector<double> x0{0.1, 0.1, 0.17, 0.25};
  const auto traj = simulate(sys, s, x0, 1.0, {});
  const auto end0 = traj.segments[0].back();
  const auto start1 = traj.segments[1].state(0);
  CHECK(end0[2] == start1[2]);
  CHECK(end0[3] == start1[3]);
  CHECK(end0[0] != start1[0]);
}

TEST_CASE("rc circuit through the hybrid driver") {
  const System sys = System::rc_circuit({1.0, 0.1, 1.0});
  const std::vector<double> x0{0.0};
  const auto traj = simulate(sys, ImpulseSchedule{}, x0, 1.0, {});
  const Arc &a = traj.segments[0];
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    worst = std::max(worst, std::abs(a.state(k)[0] - (1 - std::exp(-a.t[k] / 0.1))));
  CHECK(worst < 1e-6);
  ImpulseSchedule s;
  s.theta_instants = {0.5};
  CHECK_THROWS_AS(simulate(sys, s, x0, 1.0, {}), Error);
}

TEST_CASE("domain failure carries the partial trajectory") {
  const System sys = System::single(fx::model0(0.1));
  auto s = model0_schedule();
  s.negative_base = NegativeBasePolicy::Reject;
  const std::vector<double> x0{-0.5, 0.0};
  s.theta_instants.clear();
  s.eta_instants = {0.001};
  try {
    simulate(sys, s, x0, 1.0, {});
    FAIL("expected SimulationError");
  } catch (const SimulationError &e) {
    CHECK(e.code() == ErrorCode::Domain);
    CHECK(e.time() == 0.001);
    CHECK(e.partial().segments.size() == 1);
    CHECK(e.partial().failed_at.has_value());
  }
}

TEST_CASE("bad inputs") {
  const System sys = System::single(fx::model0());
  const std::vector<double> bad_dim{0.1};
  CHECK_THROWS_AS(simulate(sys, {}, bad_dim, 1.0, {}), Error);
  const std::vector<double> nan_x{NAN, 0.0};
  CHECK_THROWS_AS(simulate(sys, {}, nan_x, 1.0, {}), Error);
  const std::vector<double> ok{0.1, 0.0};
  CHECK_THROWS_AS(simulate(sys, {}, ok, 0.0, {}), Error);
}
