// Command-line front end. Talks to the library through the C interface only.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcimpulse/wcimpulse.h"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kSolver = 3, kVerify = 4 };

int exit_for(wci_status s) {
  switch (s) {
    case WCI_OK: return kOk;
    case WCI_E_CONFIG:
    case WCI_E_INVALID_ARGUMENT: return kConfig;
    case WCI_E_STEP_UNDERFLOW:
    case WCI_E_DOMAIN:
    case WCI_E_NO_CONVERGENCE:
    case WCI_E_BASIN_UNDETERMINED:
    case WCI_E_EMPTY_POST_TRANSIENT: return kSolver;
    case WCI_E_VERIFICATION_FAILED:
    case WCI_E_CONDITION_VIOLATED: return kVerify;
    default: return kOther;
  }
}

int report(wci_status s) {
  std::fprintf(stderr, "error (%s): %s\n", wci_status_name(s), wci_last_error());
  return exit_for(s);
}

struct Owned {
  char *p = nullptr;
  ~Owned() { wci_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Common {
  std::string scenario;
  std::string config;
  std::string out;
  std::optional<double> mu;
  std::vector<double> x0;
  unsigned jobs = 1;
  bool convergence = false;
};

struct ScenarioHandle {
  wci_scenario *s = nullptr;
  ~ScenarioHandle() { wci_scenario_free(s); }
};

wci_status open_scenario(const Common &c, ScenarioHandle &h) {
  if (!c.config.empty()) return wci_scenario_load(c.config.c_str(), &h.s);
  return wci_scenario_builtin(c.scenario.empty() ? "model0" : c.scenario.c_str(), &h.s);
}

wci_run_options options(const Common &c) {
  wci_run_options o;
  wci_run_options_init(&o);
  if (c.mu) {
    o.has_mu = 1;
    o.mu = *c.mu;
  }
  if (!c.x0.empty()) {
    o.x0 = c.x0.data();
    o.x0_len = c.x0.size();
  }
  o.jobs = c.jobs;
  o.convergence = c.convergence;
  return o;
}

// Writes `text` to <out>/<name>, or to `fallback` when no --out was given.
int emit(const Common &c, const std::string &name, const std::string &text, FILE *fallback) {
  if (c.out.empty()) {
    if (fallback) std::fwrite(text.data(), 1, text.size(), fallback);
    return kOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create '%s': %s\n", c.out.c_str(), ec.message().c_str());
    return kOther;
  }
  const std::string path = (std::filesystem::path(c.out) / name).string();
  const wci_status s = wci_write_file_atomic(path.c_str(), text.data(), text.size());
  return s == WCI_OK ? kOk : report(s);
}

int cmd_list() {
  for (size_t k = 0; k < wci_builtin_count(); ++k) std::printf("%s\n", wci_builtin_name(k));
  return kOk;
}

int cmd_show(const Common &c) {
  ScenarioHandle h;
  if (wci_status s = open_scenario(c, h)) return report(s);
  Owned text;
  if (wci_status s = wci_scenario_serialize(h.s, &text.p)) return report(s);
  return emit(c, "scenario.json", text.str(), stdout);
}

int cmd_steady(const Common &c) {
  ScenarioHandle h;
  if (wci_status s = open_scenario(c, h)) return report(s);
  Owned text;
  size_t n = 0;
  if (wci_status s = wci_steady_states(h.s, nullptr, 0, &n, &text.p)) return report(s);
  return emit(c, "steady_states.txt", text.str(), stdout);
}

int cmd_verify(const Common &c) {
  ScenarioHandle h;
  if (wci_status s = open_scenario(c, h)) return report(s);
  const wci_run_options o = options(c);
  wci_verify_summary sum{};
  Owned text;
  if (wci_status s = wci_verify(h.s, &o, &sum, &text.p)) return report(s);
  if (int rc = emit(c, "conditions.txt", text.str(), stdout)) return rc;
  if (sum.simulation_failed) {
    std::fprintf(stderr, "error: a convergence run failed\n");
    return kSolver;
  }
  if (!sum.all_pass) {
    std::fprintf(stderr, "verification failed\n");
    return kVerify;
  }
  return kOk;
}

int cmd_simulate(const Common &c) {
  ScenarioHandle h;
  if (wci_status s = open_scenario(c, h)) return report(s);
  const wci_run_options o = options(c);
  wci_trajectory *t = nullptr;
  const wci_status st = wci_simulate(h.s, &o, &t);
  if (!t) return report(st);
  const std::string err = wci_last_error();
  Owned csv, summary;
  wci_trajectory_csv(t, &csv.p);
  wci_trajectory_summary(t, &summary.p);
  wci_trajectory_free(t);
  int rc = emit(c, "trajectory.csv", csv.str(), stdout);
  if (rc == kOk) rc = emit(c, "summary.txt", summary.str(), nullptr);
  std::fputs(summary.str().c_str(), stderr);
  if (st != WCI_OK) {
    std::fprintf(stderr, "error (%s): %s\n", wci_status_name(st), err.c_str());
    return exit_for(st);
  }
  return rc;
}

int cmd_sweep(const Common &c) {
  ScenarioHandle h;
  if (wci_status s = open_scenario(c, h)) return report(s);
  const wci_run_options o = options(c);
  wci_sweep *w = nullptr;
  if (wci_status s = wci_sweep_run(h.s, &o, &w)) return report(s);
  Owned text;
  wci_sweep_report(w, &text.p);
  int rc = emit(c, "attractors.txt", text.str(), stdout);
  if (!c.out.empty()) {
    for (size_t k = 0; k < wci_sweep_cell_count(w) && rc == kOk; ++k) {
      Owned name, csv;
      if (wci_status s = wci_sweep_cell_csv(w, k, &name.p, &csv.p)) {
        rc = report(s);
        break;
      }
      rc = emit(c, name.str(), csv.str(), nullptr);
    }
    std::fputs(text.str().c_str(), stdout);
  }
  const size_t failed = wci_sweep_failed_cells(w);
  wci_sweep_free(w);
  if (rc != kOk) return rc;
  if (failed) {
    std::fprintf(stderr, "%zu sweep cell(s) failed\n", failed);
    return kSolver;
  }
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Impulsive Wilson-Cowan toolkit"};
  app.require_subcommand(1);
  Common c;

  auto add_source = [&](CLI::App *sub) {
    auto *sc = sub->add_option("--scenario", c.scenario, "builtin scenario name");
    auto *cf = sub->add_option("--config", c.config, "scenario JSON file");
    sc->excludes(cf);
  };
  auto add_out = [&](CLI::App *sub, const char *what) {
    sub->add_option("--out", c.out, what);
  };
  auto add_run = [&](CLI::App *sub) {
    sub->add_option("--mu", c.mu, "override mu")->check(CLI::PositiveNumber);
    sub->add_option("--x0", c.x0, "initial state, comma separated")->delimiter(',');
  };

  auto *list = app.add_subcommand("list-scenarios", "print the builtin scenario names");
  auto *show = app.add_subcommand("show-scenario", "print a scenario in complete JSON form");
  add_source(show);
  add_out(show, "directory for scenario.json");
  auto *steady = app.add_subcommand("steady-states", "equilibria, eigenvalues and stability");
  add_source(steady);
  add_out(steady, "directory for steady_states.txt");
  auto *verify = app.add_subcommand("verify", "check the hypotheses of the mu -> 0 limit");
  add_source(verify);
  add_out(verify, "directory for conditions.txt");
  add_run(verify);
  verify->add_flag("--convergence", c.convergence, "also run the convergence study");
  auto *sim = app.add_subcommand("simulate", "one hybrid trajectory as CSV");
  add_source(sim);
  add_out(sim, "directory for trajectory.csv and summary.txt");
  add_run(sim);
  auto *sweep = app.add_subcommand("sweep", "mu sweep with attractor classification");
  add_source(sweep);
  add_out(sweep, "directory for attractors.txt and per-cell CSVs");
  add_run(sweep);
  sweep->add_option("--jobs", c.jobs, "worker threads (0: one per core)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  if (*list) return cmd_list();
  if (*show) return cmd_show(c);
  if (*steady) return cmd_steady(c);
  if (*verify) return cmd_verify(c);
  if (*sim) return cmd_simulate(c);
  if (*sweep) return cmd_sweep(c);
  return kConfig;
}
