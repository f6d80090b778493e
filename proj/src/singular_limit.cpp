#include "singular_limit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace wci {

std::vector<bool> check_c1(const SteadyStateReport &report) {
  if (report.points.empty())
    throw Error(ErrorCode::InvalidArgument, "no steady states to check");
  std::vector<bool> out;
  for (const auto &s : report.points) out.push_back(is_hurwitz(s.jacobian));
  return out;
}

std::vector<C2Entry> check_c2(const SteadyStateReport &report,
                              const ImpulseSchedule &sched, double tol) {
  const auto stable = report.stable_indices();
  if (stable.empty())
    throw Error(ErrorCode::InvalidArgument, "no stable steady state");
  std::vector<C2Entry> out;
  for (std::size_t j : stable) {
    C2Entry e;
    e.from = j;
    e.image = apply_regular_jump(sched, report.points[j].point);
    e.residual = std::numeric_limits<double>::infinity();
    for (std::size_t i : stable) {
      const double r = norm(e.image - report.points[i].point);
      if (r < e.residual) {
        e.residual = r;
        e.to = i;
      }
    }
    e.pass = e.residual < tol;
    out.push_back(e);
  }
  return out;
}

double C3Sample::norm() const { return std::hypot(max_k, max_j); }

std::vector<C3Entry> check_c3(const ImpulseSchedule &sched,
                              const SteadyStateReport &report,
                              const C3Grid &grid) {
  if (grid.mu.empty() || grid.radius.empty())
    throw Error(ErrorCode::InvalidArgument, "C3 grids must be nonempty");
  for (double v : grid.mu)
    if (!(v > 0)) throw Error(ErrorCode::InvalidArgument, "C3 mu values must be > 0");
  for (double v : grid.radius)
    if (!(v >= 0)) throw Error(ErrorCode::InvalidArgument, "C3 radii must be >= 0");

  auto mus = grid.mu;
  auto radii = grid.radius;
  std::sort(mus.rbegin(), mus.rend());
  std::sort(radii.rbegin(), radii.rend());

  std::vector<C3Entry> out;
  for (std::size_t j : report.stable_indices()) {
    const State2 c = report.points[j].point;
    C3Entry entry;
    entry.state = j;
    for (double mu : mus) {
      for (double r : radii) {
        C3Sample s{mu, r, 0, 0};
        auto take = [&](State2 x) {
          const State2 raw = singular_raw(sched, x, mu, mu);
          s.max_k = std::max(s.max_k, std::abs(raw.E / mu));
          s.max_j = std::max(s.max_j, std::abs(raw.I / mu));
        };
        take(c);
        for (int k = 1; k <= 4 && r > 0; ++k) {
          for (int a = 0; a < 16; ++a) {
            const double ang = 2 * std::numbers::pi * a / 16;
            const double rr = r * k / 4;
            take({c.E + rr * std::cos(ang), c.I + rr * std::sin(ang)});
          }
        }
        entry.samples.push_back(s);
      }
    }
    // Non-increasing as mu shrinks (fixed radius) and as radius shrinks
    // (fixed mu), with a little room for rounding.
    const std::size_t nr = radii.size();
    auto at = [&](std::size_t m, std::size_t r) { return entry.samples[m * nr + r].norm(); };
    entry.monotone = true;
    for (std::size_t m = 0; m < mus.size(); ++m)
      for (std::size_t r = 0; r < nr; ++r) {
        const double v = at(m, r);
        const double slack = 1e-12 + 1e-9 * v;
        if (m + 1 < mus.size() && at(m + 1, r) > v + slack) entry.monotone = false;
        if (r + 1 < nr && at(m, r + 1) > v + slack) entry.monotone = false;
      }
    entry.final_value = entry.samples.back().norm();
    entry.pass = entry.monotone && entry.final_value < grid.final_tol;
    out.push_back(std::move(entry));
  }
  return out;
}

bool ConditionReport::c1_pass() const {
  return std::any_of(c1.begin(), c1.end(), [](bool b) { return b; });
}

bool ConditionReport::c2_pass() const {
  return !c2.empty() &&
         std::all_of(c2.begin(), c2.end(), [](const C2Entry &e) { return e.pass; });
}

bool ConditionReport::c3_pass() const {
  return !c3.empty() &&
         std::all_of(c3.begin(), c3.end(), [](const C3Entry &e) { return e.pass; });
}

ConditionReport verify_conditions(const SteadyStateReport &report,
                                  const ImpulseSchedule &sched, double c2_tol,
                                  const C3Grid &grid) {
  ConditionReport out;
  out.c1 = check_c1(report);
  out.c2_tol = c2_tol;
  out.c2 = check_c2(report, sched, c2_tol);
  out.c3 = check_c3(sched, report, grid);
  return out;
}

std::size_t probe_basin(const PopulationParams &p, const SteadyStateReport &report,
                        State2 x0, const BasinProbe &probe,
                        const SolverConfig &cfg) {
  const System sys = System::single(p.with_time_constants(1.0, 1.0));
  const std::vector<double> x{x0.E, x0.I};
  SolverConfig c = cfg;
  c.sample_stride = std::max(c.sample_stride, 0.1);
  const Arc arc = integrate_segment(sys.field(), 0, probe.horizon, x, c);
  const State2 end{arc.back()[0], arc.back()[1]};
  for (std::size_t j : report.stable_indices())
    if (norm(end - report.points[j].point) < probe.tol) return j;
  throw Error(ErrorCode::BasinUndetermined,
              "basin probe did not settle on a stable steady state");
}

State2 LimitSolution::at(double t) const {
  if (pieces.empty()) throw Error(ErrorCode::InvalidArgument, "empty limit solution");
  for (const auto &p : pieces)
    if (t <= p.t1) return p.state;
  return pieces.back().state;
}

LimitSolution limit_solution(const SteadyStateReport &report,
                             const ImpulseSchedule &sched, std::size_t start,
                             double horizon, double c2_tol) {
  if (start >= report.points.size() || !report.points[start].hurwitz)
    throw Error(ErrorCode::InvalidArgument, "limit path must start at a stable state");
  if (!(horizon > 0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  const auto map = check_c2(report, sched, c2_tol);
  auto next = [&](std::size_t j) {
    for (const auto &e : map) {
      if (e.from != j) continue;
      if (!e.pass)
        throw Error(ErrorCode::ConditionViolated,
                    "regular jump does not map a stable state onto another");
      return e.to;
    }
    throw Error(ErrorCode::ConditionViolated, "state is not stable");
  };

  LimitSolution z;
  z.origin_domain = start;
  std::size_t cur = start;
  double t0 = 0;
  for (double th : sched.theta_instants) {
    if (th >= horizon) break;
    z.pieces.push_back({t0, th, cur, report.points[cur].point});
    cur = next(cur);
    t0 = th;
  }
  z.pieces.push_back({t0, horizon, cur, report.points[cur].point});
  return z;
}

double convergence_metric(const HybridTrajectory &traj, const LimitSolution &z,
                          double layer_width) {
  if (!(layer_width > 0))
    throw Error(ErrorCode::InvalidArgument, "layer width must be > 0");
  if (traj.dim < 2) throw Error(ErrorCode::InvalidArgument, "trajectory has no (E, I) pair");
  double worst = 0;
  for (const Arc &a : traj.segments) {
    if (a.empty()) continue;
    const double skip = a.t.front() + layer_width;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a.t[k] <= skip) continue;
      const auto x = a.state(k);
      worst = std::max(worst, norm(State2{x[0], x[1]} - z.at(a.t[k])));
    }
  }
  return worst;
}

std::vector<ConvergencePoint> convergence_study(
    const PopulationParams &p, const ImpulseSchedule &sched, State2 x0,
    double horizon, const LimitSolution &z, const std::vector<double> &mus,
    double layer_width, const SolverConfig &cfg) {
  std::vector<ConvergencePoint> out;
  const std::vector<double> x{x0.E, x0.I};
  for (double mu : mus) {
    ConvergencePoint pt;
    pt.mu = mu;
    try {
      const System sys = System::single(p.with_time_constants(mu, mu));
      const auto traj = simulate(sys, sched, x, horizon, cfg);
      pt.metric = convergence_metric(traj, z, layer_width);
    } catch (const Error &e) {
      pt.metric = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

bool strictly_decreasing(const std::vector<ConvergencePoint> &pts) {
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].error) return false;
    if (k > 0 && !(pts[k].metric < pts[k - 1].metric)) return false;
  }
  return !pts.empty();
}

}  // namespace wci
