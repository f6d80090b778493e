#include "commands.hpp"

#include <cmath>

namespace wci {

namespace {

void require_population(const ScenarioConfig &cfg, const char *what) {
  if (cfg.kind == ModelKind::Rc)
    throw Error(ErrorCode::Config, std::string(what) + " needs a Wilson-Cowan population");
}

std::vector<double> pick_x0(const ScenarioConfig &cfg, const RunOptions &opts) {
  std::vector<double> x = opts.x0 ? *opts.x0 : cfg.initial_states.at(0);
  if (x.size() != cfg.dimension())
    throw Error(ErrorCode::Config,
                strf("x0 needs %zu components, got %zu", cfg.dimension(), x.size()));
  return x;
}

double pick_mu(const ScenarioConfig &cfg, const RunOptions &opts) {
  if (opts.mu) {
    if (!(*opts.mu > 0)) throw Error(ErrorCode::Config, "mu must be > 0");
    return *opts.mu;
  }
  if (cfg.mu.empty()) return 1.0;  // rc ignores it
  return cfg.mu.front();
}

std::string vec(const std::vector<double> &v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += strf(k ? ", %.10g" : "%.10g", v[k]);
  return s + ")";
}

}  // namespace

SteadyOutcome cmd_steady_states(const ScenarioConfig &cfg) {
  require_population(cfg, "steady-states");
  SteadyOutcome out;
  const auto &a = cfg.analysis;
  out.pairs.push_back({cfg.kind == ModelKind::Coupled ? "impulsive pair" : "population",
                       find_steady_states(cfg.population, a.domain_bound, a.grid_n)});
  if (cfg.passive)
    out.pairs.push_back(
        {"passive pair", find_steady_states(*cfg.passive, a.domain_bound, a.grid_n)});
  for (const auto &[label, rep] : out.pairs) {
    if (!out.text.empty()) out.text += "\n";
    out.text += format_steady_states(cfg.name + ", " + label, rep);
  }
  return out;
}

VerifyOutcome cmd_verify(const ScenarioConfig &cfg, const RunOptions &opts) {
  require_population(cfg, "verify");
  VerifyOutcome out;
  const auto &a = cfg.analysis;
  const ImpulseSchedule sched = cfg.schedule();
  out.states = find_steady_states(cfg.population, a.domain_bound, a.grid_n);
  out.conditions = verify_conditions(out.states, sched, a.c2_tol, a.c3);

  if (opts.convergence) {
    std::vector<double> mus = a.convergence_mu;
    if (mus.empty()) {
      if (!opts.mu) throw Error(ErrorCode::Config, "scenario lists no convergence mu values");
      mus = {*opts.mu};
    }
    const auto x = pick_x0(cfg, opts);
    const State2 x0{x[0], x[1]};
    ConvergenceTable t;
    t.start = {x[0], x[1]};
    t.layer_width = a.layer_width;
    t.threshold = a.convergence_threshold;
    t.start_state = probe_basin(cfg.population, out.states, x0,
                                BasinProbe{a.probe_horizon, 1e-3}, cfg.solver);
    const auto z = limit_solution(out.states, sched, t.start_state, cfg.horizon, a.c2_tol);
    t.points = convergence_study(cfg.population, sched, x0, cfg.horizon, z, mus,
                                 a.layer_width, cfg.solver);
    for (const auto &p : t.points) out.simulation_failed = out.simulation_failed || p.error;
    t.decreasing = strictly_decreasing(t.points);
    if (t.threshold > 0)
      t.below_threshold = !t.points.back().error && t.points.back().metric < t.threshold;
    out.convergence = std::move(t);
  }
  out.text = format_conditions(out.states, out.conditions, out.convergence);
  return out;
}

SimulateOutcome cmd_simulate(const ScenarioConfig &cfg, const RunOptions &opts) {
  SimulateOutcome out;
  out.mu = pick_mu(cfg, opts);
  out.x0 = pick_x0(cfg, opts);
  try {
    out.trajectory = simulate(cfg.system(out.mu), cfg.schedule(), out.x0, cfg.horizon,
                              cfg.solver);
  } catch (const SimulationError &e) {
    out.trajectory = e.partial();
    out.error = e.what();
    out.error_code = e.code();
  }
  out.csv = trajectory_csv(out.trajectory, cfg.output.csv_every);

  const auto &tr = out.trajectory;
  std::size_t regular = 0, singular = 0, clamped = 0;
  for (const auto &j : tr.jumps) {
    (j.kind == JumpKind::Regular ? regular : singular)++;
    clamped += j.clamped;
  }
  std::string s = strf("scenario %s, mu %g, x0 %s, horizon %g\n", cfg.name.c_str(), out.mu,
                       vec(out.x0).c_str(), cfg.horizon);
  s += strf("segments %zu, jumps %zu (regular %zu, singular %zu), clamped %zu, samples %zu\n",
            tr.segments.size(), tr.jumps.size(), regular, singular, clamped, tr.sample_count());
  if (!tr.segments.empty() && !tr.segments.back().empty()) {
    const auto e = tr.endpoint();
    const double t_end = tr.segments.back().t.back();
    s += strf("endpoint t=%.10g %s\n", t_end, vec({e.begin(), e.end()}).c_str());
  }
  for (const auto &w : tr.warnings) s += "warning: " + w + "\n";
  if (out.error) s += "failure: " + *out.error + "\n";
  out.summary = s;
  return out;
}

bool SweepOutcome::any_failed() const {
  for (const auto &c : cells)
    if (!c.error.empty()) return true;
  return false;
}

SweepOutcome cmd_sweep(const ScenarioConfig &cfg, const RunOptions &opts) {
  require_population(cfg, "sweep");
  SweepInput in;
  in.make_system = [&cfg](double m) { return cfg.system(m); };
  in.schedule = cfg.schedule();
  in.regimes = cfg.sweep_regimes();
  if (opts.mu || opts.x0) {
    std::vector<std::vector<double>> states = cfg.initial_states;
    if (opts.x0) states = {pick_x0(cfg, opts)};
    if (opts.mu) {
      in.regimes = {{pick_mu(cfg, opts), states}};
    } else {
      for (auto &r : in.regimes) r.initial_states = states;
    }
  }
  in.horizon = cfg.horizon;
  in.solver = cfg.solver;
  in.classifier = cfg.classifier;
  in.jobs = opts.jobs;

  SweepOutcome out;
  out.reports = mu_sweep(in, &out.cells);
  for (const auto &c : out.cells) {
    if (!c.trajectory) continue;
    out.cell_csv.push_back({strf("cell_r%zu_mu%g_x%zu.csv", c.regime, c.mu, c.initial_state),
                            trajectory_csv(*c.trajectory, cfg.output.csv_every)});
  }
  out.text = format_attractor_reports(cfg.name, cfg.classifier, out.reports);
  return out;
}

}  // namespace wci
