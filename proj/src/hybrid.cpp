#include "hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace wci {

void RcCircuit::validate() const {
  if (!(resistance > 0) || !(capacitance > 0) || !std::isfinite(current))
    throw Error(ErrorCode::Config, "rc circuit needs R > 0, C > 0");
}

System System::rc_circuit(RcCircuit rc) {
  rc.validate();
  return System(rc);
}

System System::single(PopulationParams impulsive) {
  impulsive.validate();
  return System(Single{impulsive});
}

System System::coupled(PopulationParams impulsive, PopulationParams passive) {
  impulsive.validate();
  passive.validate();
  return System(Coupled{impulsive, passive});
}

std::size_t System::dimension() const {
  switch (model_.index()) {
    case 0: return 1;
    case 1: return 2;
    default: return 4;
  }
}

void System::rate(std::span<const double> x, std::span<double> dxdt) const {
  if (const auto *rc = std::get_if<RcCircuit>(&model_)) {
    dxdt[0] = (-x[0] + rc->current * rc->resistance) / rc->time_constant();
    return;
  }
  if (const auto *s = std::get_if<Single>(&model_)) {
    const State2 r = vector_field(s->p, {x[0], x[1]});
    dxdt[0] = r.E;
    dxdt[1] = r.I;
    return;
  }
  const auto &c = std::get<Coupled>(model_);
  const State2 r = vector_field(c.p, {x[0], x[1]});
  const State2 q = vector_field(c.q, {x[2], x[3]});
  dxdt[0] = r.E;
  dxdt[1] = r.I;
  dxdt[2] = q.E;
  dxdt[3] = q.I;
}

Field System::field() const {
  return [sys = *this](double, std::span<const double> x, std::span<double> dx) {
    sys.rate(x, dx);
  };
}

double System::min_time_constant() const {
  if (const auto *rc = std::get_if<RcCircuit>(&model_)) return rc->time_constant();
  if (const auto *s = std::get_if<Single>(&model_))
    return std::min(s->p.mu_e, s->p.mu_i);
  const auto &c = std::get<Coupled>(model_);
  return std::min({c.p.mu_e, c.p.mu_i, c.q.mu_e, c.q.mu_i});
}

const PopulationParams &System::impulsive() const {
  if (const auto *s = std::get_if<Single>(&model_)) return s->p;
  if (const auto *c = std::get_if<Coupled>(&model_)) return c->p;
  throw Error(ErrorCode::InvalidArgument, "rc circuit has no population pair");
}

const PopulationParams *System::passive() const {
  if (const auto *c = std::get_if<Coupled>(&model_)) return &c->q;
  return nullptr;
}

void ImpulseSchedule::validate() const {
  auto check_list = [](const std::vector<double> &v, const char *name) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k]) || !(v[k] > 0))
        throw Error(ErrorCode::Config,
                    std::string(name) + " instants must be positive");
      if (k > 0 && !(v[k] > v[k - 1]))
        throw Error(ErrorCode::Config, std::string(name) +
                                           " instants must be strictly increasing");
    }
  };
  check_list(theta_instants, "theta");
  check_list(eta_instants, "eta");
  for (double a : theta_instants)
    for (double b : eta_instants)
      if (std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)))
        throw Error(ErrorCode::Config,
                    "theta and eta instants must be distinct");
  regular_jump.E.validate();
  regular_jump.I.validate();
  singular_jump.E.validate();
  singular_jump.I.validate();
  if (regular_jump.E.depends_on_mu() || regular_jump.I.depends_on_mu())
    throw Error(ErrorCode::Config, "regular jump map must not depend on mu");
}

const char *jump_kind_name(JumpKind k) {
  return k == JumpKind::Regular ? "regular" : "singular";
}

State2 apply_regular_jump(const ImpulseSchedule &sched, State2 s) {
  const double dE =
      evaluate(sched.regular_jump.E, s.E, s.I, 0.0, sched.negative_base).value;
  const double dI =
      evaluate(sched.regular_jump.I, s.I, s.E, 0.0, sched.negative_base).value;
  return {s.E + dE, s.I + dI};
}

State2 singular_raw(const ImpulseSchedule &sched, State2 s, double mu_e,
                    double mu_i, bool *clamped) {
  const TermValue k =
      evaluate(sched.singular_jump.E, s.E, s.I, mu_e, sched.negative_base);
  const TermValue j =
      evaluate(sched.singular_jump.I, s.I, s.E, mu_i, sched.negative_base);
  if (clamped) *clamped = k.clamped || j.clamped;
  return {k.value, j.value};
}

State2 apply_singular_jump(const ImpulseSchedule &sched, State2 s, double mu_e,
                           double mu_i, bool *clamped) {
  if (!(mu_e > 0) || !(mu_i > 0))
    throw Error(ErrorCode::InvalidArgument, "time constants must be positive");
  const State2 raw = singular_raw(sched, s, mu_e, mu_i, clamped);
  return {s.E + raw.E / mu_e, s.I + raw.I / mu_i};
}

std::size_t HybridTrajectory::sample_count() const {
  std::size_t n = 0;
  for (const auto &a : segments) n += a.size();
  return n;
}

namespace {

struct Event {
  double t;
  JumpKind kind;
};

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", t);
  return buf;
}

}  // namespace

HybridTrajectory simulate(const System &system, const ImpulseSchedule &sched,
                          std::span<const double> x0, double horizon,
                          const SolverConfig &cfg) {
  if (x0.size() != system.dimension())
    throw Error(ErrorCode::InvalidArgument, "initial state has wrong dimension");
  if (!std::all_of(x0.begin(), x0.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCode::InvalidArgument, "initial state must be finite");
  if (!(horizon > 0)) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  sched.validate();
  if (!system.has_population() && !sched.empty())
    throw Error(ErrorCode::Config, "impulses need a population model");

  std::vector<Event> events;
  for (double t : sched.theta_instants)
    if (t < horizon) events.push_back({t, JumpKind::Regular});
  for (double t : sched.eta_instants)
    if (t < horizon) events.push_back({t, JumpKind::Singular});
  std::sort(events.begin(), events.end(),
            [](const Event &a, const Event &b) { return a.t < b.t; });

  const SolverConfig run_cfg = cfg.for_time_constant(system.min_time_constant());
  const Field field = system.field();

  HybridTrajectory traj;
  traj.dim = system.dimension();
  traj.horizon = horizon;

  std::vector<double> x(x0.begin(), x0.end());
  double t = 0.0;
  auto fail = [&](ErrorCode code, double at, const std::string &msg) {
    traj.failed_at = at;
    traj.failure = msg;
    throw SimulationError(code, at, msg, std::move(traj));
  };

  for (std::size_t k = 0; k <= events.size(); ++k) {
    const double t_next = k < events.size() ? events[k].t : horizon;
    try {
      traj.segments.push_back(integrate_segment(field, t, t_next, x, run_cfg));
    } catch (const StepUnderflowError &e) {
      traj.segments.push_back(e.partial());
      fail(ErrorCode::StepUnderflow, e.time(), e.what());
    }
    if (k == events.size()) break;

    const auto end = traj.segments.back().back();
    x.assign(end.begin(), end.end());
    const Event ev = events[k];
    JumpRecord rec;
    rec.t = ev.t;
    rec.kind = ev.kind;
    rec.pre = {x[0], x[1]};
    try {
      if (ev.kind == JumpKind::Regular) {
        rec.post = apply_regular_jump(sched, rec.pre);
      } else {
        const auto &p = system.impulsive();
        rec.post = apply_singular_jump(sched, rec.pre, p.mu_e, p.mu_i, &rec.clamped);
      }
    } catch (const Error &e) {
      fail(ErrorCode::Domain, ev.t,
           std::string(e.what()) + " at t=" + format_time(ev.t));
    }
    if (!std::isfinite(rec.post.E) || !std::isfinite(rec.post.I))
      fail(ErrorCode::Domain, ev.t,
           "jump map undefined at t=" + format_time(ev.t));
    if (rec.clamped)
      traj.warnings.push_back("negative base clamped to 0 in singular jump at t=" +
                              format_time(ev.t));
    x[0] = rec.post.E;
    x[1] = rec.post.I;
    traj.jumps.push_back(rec);
    t = ev.t;
  }
  return traj;
}

}  // namespace wci
