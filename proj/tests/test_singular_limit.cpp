#include <cmath>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "singular_limit.hpp"

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

SteadyStateReport single_state(State2 at, Matrix2 j) {
  SteadyStateReport r;
  SteadyState s;
  s.point = at;
  s.jacobian = j;
  s.eigen = eigenvalues(j);
  s.hurwitz = is_hurwitz(j);
  r.points.push_back(s);
  return r;
}

}  // namespace

TEST_CASE("c1 flags per state") {
  CHECK(check_c1(find_steady_states(fx::model0())) == std::vector<bool>{true, false, true});
  CHECK(check_c1(find_steady_states(fx::three_states())) ==
        std::vector<bool>{true, false, true, false, true});
  CHECK(check_c1(single_state({0, 0}, {})) == std::vector<bool>{false});
  CHECK_THROWS_AS(check_c1(SteadyStateReport{}), Error);
}

TEST_CASE("c2 swap between the two stable states") {
  const auto rep = find_steady_states(fx::model0());
  const auto c2 = check_c2(rep, model0_schedule());
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].from == 0);
  CHECK(c2[0].to == 2);
  CHECK(c2[1].from == 2);
  CHECK(c2[1].to == 0);
  for (const auto &e : c2) {
    CHECK(e.pass);
    CHECK(e.residual < 1e-5);
  }
  // Five printed digits leave a few 1e-6 of mismatch at the exact state.
  CHECK(c2[1].residual > 1e-6);
}

TEST_CASE("c2 for the quadratic increments of the three-state set") {
  const auto rep = find_steady_states(fx::three_states());
  ImpulseSchedule s;
  s.regular_jump = jump_preset("quadratic-3states");
  const auto c2 = check_c2(rep, s);
  REQUIRE(c2.size() == 3);
  CHECK(c2[0].to == 4);
  CHECK(c2[0].pass);
  CHECK(c2[1].to == 2);
  CHECK(c2[1].pass);
  CHECK_FALSE(c2[2].pass);
  CHECK(c2[2].image.E == doctest::Approx(0.654).epsilon(1e-2));
}

TEST_CASE("identity jump with one state is a fixed point") {
  const auto rep = single_state({0.1, 0.2}, {{{-1, 0}, {0, -1}}});
  const auto c2 = check_c2(rep, ImpulseSchedule{});
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].residual == 0);
  CHECK(c2[0].pass);
}

TEST_CASE("c3 table shrinks for the singular map") {
  const auto rep = find_steady_states(fx::model0());
  const auto c3 = check_c3(model0_schedule(), rep);
  REQUIRE(c3.size() == 2);
  for (const auto &e : c3) {
    CHECK(e.monotone);
    CHECK(e.final_value < 1e-3);
    CHECK(e.pass);
  }
}

TEST_CASE("c3 at the center decays linearly in mu") {
  const auto rep = find_steady_states(fx::model0());
  C3Grid g;
  g.radius = {0.0};
  const auto c3 = check_c3(model0_schedule(), rep, g);
  const State2 hi = rep.points[2].point;
  for (const auto &s : c3[1].samples) {
    const double mu = s.mu;
    CHECK(s.max_k == doctest::Approx(std::sin(mu * mu) / mu * hi.I).epsilon(1e-9));
  }
  for (const auto &s : c3[0].samples) CHECK(s.norm() < 1e-7);
}

TEST_CASE("constant raw jump violates c3") {
  const auto rep = find_steady_states(fx::model0());
  ImpulseSchedule s;
  s.singular_jump.E = {.alpha = 1.0, .power_num = 0, .power_den = 1, .shift = 0,
                       .shift_power = 0, .mu_power = 1, .gamma = 0, .poly = {}};
  const auto c3 = check_c3(s, rep);
  for (const auto &e : c3) {
    CHECK(e.final_value == doctest::Approx(1.0));
    CHECK_FALSE(e.pass);
  }
}

TEST_CASE("full condition report for the impulsive model0 set") {
  const auto rep = find_steady_states(fx::model0());
  const auto cr = verify_conditions(rep, model0_schedule());
  CHECK(cr.c1_pass());
  CHECK(cr.c2_pass());
  CHECK(cr.c3_pass());
  CHECK(cr.all_pass());
}

TEST_CASE("basin probe") {
  const auto rep = find_steady_states(fx::model0());
  CHECK(probe_basin(fx::model0(), rep, {0.25, 0.0}) == 2);
  CHECK(probe_basin(fx::model0(), rep, {0.001, 0.001}) == 0);
  try {
    probe_basin(fx::model0(), rep, rep.points[1].point);
    FAIL("expected BasinUndetermined");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::BasinUndetermined);
  }
}

TEST_CASE("limit path alternates through the swap") {
  const auto rep = find_steady_states(fx::model0());
  const auto sched = model0_schedule();
  const auto z = limit_solution(rep, sched, 2, 14.0);
  REQUIRE(z.pieces.size() == 21);
  CHECK(z.pieces.front().t0 == 0);
  CHECK(z.pieces.back().t1 == 14.0);
  for (std::size_t k = 0; k < z.pieces.size(); ++k) {
    CHECK(z.pieces[k].state_index == (k % 2 == 0 ? 2u : 0u));
    if (k + 1 < z.pieces.size()) {
      CHECK(z.pieces[k].t1 == z.pieces[k + 1].t0);
      const State2 img = apply_regular_jump(sched, z.pieces[k].state);
      CHECK(norm(img - z.pieces[k + 1].state) < 1e-5);
    }
  }
  CHECK(z.at(0.0) == rep.points[2].point);
  CHECK(z.at(2.0 / 3.0) == rep.points[2].point);
  CHECK(z.at(2.0 / 3.0 + 1e-9) == rep.points[0].point);

  const auto z0 = limit_solution(rep, sched, 0, 14.0);
  CHECK(z0.pieces.front().state_index == 0);

  ImpulseSchedule one;
  one.theta_instants = {1.0};
  one.regular_jump = sched.regular_jump;
  CHECK(limit_solution(rep, one, 0, 2.0).pieces.size() == 2);
  CHECK_THROWS_AS(limit_solution(rep, sched, 1, 14.0), Error);
}

TEST_CASE("broken c2 map stops the limit path") {
  const auto rep = find_steady_states(fx::three_states());
  ImpulseSchedule s;
  s.theta_instants = {1.0, 2.0};
  s.regular_jump = jump_preset("quadratic-3states");
  try {
    limit_solution(rep, s, 0, 3.0);
    FAIL("expected ConditionViolated");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::ConditionViolated);
  }
}

TEST_CASE("metric of the limit path against itself is zero") {
  const auto rep = find_steady_states(fx::model0());
  const auto sched = model0_schedule();
  const auto z = limit_solution(rep, sched, 2, 14.0);
  HybridTrajectory traj;
  traj.dim = 2;
  traj.horizon = 14.0;
  for (const auto &p : z.pieces) {
    Arc a;
    a.dim = 2;
    for (int k = 0; k <= 100; ++k) {
      const double t = p.t0 + (p.t1 - p.t0) * k / 100.0;
      const State2 s = k == 0 && p.t0 > 0 ? z.at(p.t0 + 1e-12) : z.at(t);
      const double xs[2] = {s.E, s.I};
      a.push(t, xs);
    }
    traj.segments.push_back(a);
  }
  CHECK(convergence_metric(traj, z, 0.05) == 0);
  CHECK_THROWS_AS(convergence_metric(traj, z, 0.0), Error);
}

TEST_CASE("distance to the limit path against an independent solver") {
  // Reference values from a separate scipy solve_ivp run (rtol 1e-11).
  const auto rep = find_steady_states(fx::model0());
  const auto sched = model0_schedule();
  const auto z = limit_solution(rep, sched, 2, 14.0);
  const auto pts = convergence_study(fx::model0(), sched, {0.25, 0.0}, 14.0, z,
                                     {0.3, 0.2, 0.1}, 0.05);
  const double ref[3] = {0.2530, 0.2349, 0.1903};
  for (int k = 0; k < 3; ++k) {
    CHECK_FALSE(pts[k].error.has_value());
    CHECK(pts[k].metric == doctest::Approx(ref[k]).epsilon(2e-3));
  }
  CHECK(strictly_decreasing(pts));
}
