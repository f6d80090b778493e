#include "wcimpulse/wcimpulse.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"

struct wci_scenario {
  wci::ScenarioConfig cfg;
};

struct wci_trajectory {
  wci::SimulateOutcome run;
};

struct wci_sweep {
  wci::SweepOutcome run;
};

namespace {

thread_local std::string g_last_error;

wci_status fail(wci_status s, const std::string &msg) {
  g_last_error = msg;
  return s;
}

template <class F>
wci_status guarded(F &&f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const wci::Error &e) {
    return fail(static_cast<wci_status>(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(WCI_E_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(WCI_E_INTERNAL, e.what());
  } catch (...) {
    return fail(WCI_E_INTERNAL, "unknown failure");
  }
}

char *dup(const std::string &s) {
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

wci::RunOptions convert(const wci_run_options *o) {
  wci::RunOptions r;
  if (!o) return r;
  if (o->has_mu) r.mu = o->mu;
  if (o->x0) r.x0 = std::vector<double>(o->x0, o->x0 + o->x0_len);
  r.jobs = o->jobs;
  r.convergence = o->convergence != 0;
  return r;
}

#define WCI_REQUIRE(cond)                                                   \
  do {                                                                      \
    if (!(cond)) return fail(WCI_E_INVALID_ARGUMENT, "null or bad argument: " #cond); \
  } while (0)

const wci::AttractorReport *regime_at(const wci_sweep *w, size_t r) {
  if (!w || r >= w->run.reports.size()) return nullptr;
  return &w->run.reports[r];
}

}  // namespace

extern "C" {

const char *wci_version(void) { return "1.0.0"; }

const char *wci_last_error(void) { return g_last_error.c_str(); }

const char *wci_status_name(wci_status s) {
  switch (s) {
    case WCI_OK: return "ok";
    case WCI_E_INTERNAL: return "internal";
    default: return wci::error_code_name(static_cast<wci::ErrorCode>(s));
  }
}

void wci_string_free(char *s) { std::free(s); }

wci_status wci_write_file_atomic(const char *path, const char *data, size_t len) {
  return guarded([&] {
    WCI_REQUIRE(path && (data || len == 0));
    wci::write_file_atomic(path, std::string(data ? data : "", len));
    return WCI_OK;
  });
}

size_t wci_builtin_count(void) { return wci::builtin_scenario_names().size(); }

const char *wci_builtin_name(size_t index) {
  static const std::vector<std::string> names = wci::builtin_scenario_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

wci_status wci_scenario_builtin(const char *name, wci_scenario **out) {
  return guarded([&] {
    WCI_REQUIRE(name && out);
    *out = new wci_scenario{wci::builtin_scenario(name)};
    return WCI_OK;
  });
}

wci_status wci_scenario_parse(const char *json, wci_scenario **out) {
  return guarded([&] {
    WCI_REQUIRE(json && out);
    *out = new wci_scenario{wci::parse_scenario(json)};
    return WCI_OK;
  });
}

wci_status wci_scenario_load(const char *path, wci_scenario **out) {
  return guarded([&] {
    WCI_REQUIRE(path && out);
    *out = new wci_scenario{wci::load_scenario_file(path)};
    return WCI_OK;
  });
}

wci_status wci_scenario_serialize(const wci_scenario *s, char **out) {
  return guarded([&] {
    WCI_REQUIRE(s && out);
    *out = dup(wci::serialize_scenario(s->cfg));
    return WCI_OK;
  });
}

size_t wci_scenario_dimension(const wci_scenario *s) { return s ? s->cfg.dimension() : 0; }

void wci_scenario_free(wci_scenario *s) { delete s; }

void wci_run_options_init(wci_run_options *o) {
  if (!o) return;
  *o = wci_run_options{};
  o->jobs = 1;
}

wci_status wci_steady_states(const wci_scenario *s, wci_steady_state *buf, size_t capacity,
                             size_t *count, char **text) {
  return guarded([&] {
    WCI_REQUIRE(s && (buf || capacity == 0));
    const auto res = wci::cmd_steady_states(s->cfg);
    const auto &pts = res.pairs.front().second.points;
    for (size_t k = 0; k < pts.size() && k < capacity; ++k) {
      const auto &p = pts[k];
      buf[k].E = p.point.E;
      buf[k].I = p.point.I;
      buf[k].eig_re[0] = p.eigen.first.real();
      buf[k].eig_im[0] = p.eigen.first.imag();
      buf[k].eig_re[1] = p.eigen.second.real();
      buf[k].eig_im[1] = p.eigen.second.imag();
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) buf[k].jacobian[2 * r + c] = p.jacobian[r][c];
      buf[k].hurwitz = p.hurwitz;
    }
    if (count) *count = pts.size();
    if (text) *text = dup(res.text);
    return WCI_OK;
  });
}

wci_status wci_verify(const wci_scenario *s, const wci_run_options *o, wci_verify_summary *out,
                      char **text) {
  return guarded([&] {
    WCI_REQUIRE(s);
    const auto res = wci::cmd_verify(s->cfg, convert(o));
    if (out) {
      out->c1_pass = res.conditions.c1_pass();
      out->c2_pass = res.conditions.c2_pass();
      out->c3_pass = res.conditions.c3_pass();
      out->convergence_run = res.convergence.has_value();
      out->convergence_pass = res.convergence && res.convergence->pass();
      out->simulation_failed = res.simulation_failed;
      out->all_pass = res.pass();
    }
    if (text) *text = dup(res.text);
    return WCI_OK;
  });
}

wci_status wci_simulate(const wci_scenario *s, const wci_run_options *o, wci_trajectory **out) {
  return guarded([&] {
    WCI_REQUIRE(s && out);
    *out = nullptr;
    auto *t = new wci_trajectory{wci::cmd_simulate(s->cfg, convert(o))};
    *out = t;
    if (t->run.error) return fail(static_cast<wci_status>(t->run.error_code), *t->run.error);
    return WCI_OK;
  });
}

size_t wci_trajectory_dimension(const wci_trajectory *t) {
  return t ? t->run.trajectory.dim : 0;
}

size_t wci_trajectory_sample_count(const wci_trajectory *t) {
  return t ? t->run.trajectory.sample_count() : 0;
}

size_t wci_trajectory_samples(const wci_trajectory *t, double *times, double *x,
                              size_t capacity) {
  if (!t) return 0;
  const auto &tr = t->run.trajectory;
  size_t n = 0;
  for (const auto &seg : tr.segments)
    for (size_t k = 0; k < seg.size() && n < capacity; ++k, ++n) {
      if (times) times[n] = seg.t[k];
      if (x) {
        const auto st = seg.state(k);
        std::copy(st.begin(), st.end(), x + n * tr.dim);
      }
    }
  return n;
}

size_t wci_trajectory_jump_count(const wci_trajectory *t) {
  return t ? t->run.trajectory.jumps.size() : 0;
}

wci_status wci_trajectory_jump(const wci_trajectory *t, size_t index, double *time,
                               wci_jump_kind *kind, double pre[2], double post[2]) {
  return guarded([&] {
    WCI_REQUIRE(t && index < t->run.trajectory.jumps.size());
    const auto &j = t->run.trajectory.jumps[index];
    if (time) *time = j.t;
    if (kind) *kind = j.kind == wci::JumpKind::Regular ? WCI_JUMP_REGULAR : WCI_JUMP_SINGULAR;
    if (pre) pre[0] = j.pre.E, pre[1] = j.pre.I;
    if (post) post[0] = j.post.E, post[1] = j.post.I;
    return WCI_OK;
  });
}

int wci_trajectory_failed(const wci_trajectory *t, double *time) {
  if (!t || !t->run.trajectory.failed_at) return 0;
  if (time) *time = *t->run.trajectory.failed_at;
  return 1;
}

wci_status wci_trajectory_csv(const wci_trajectory *t, char **out) {
  return guarded([&] {
    WCI_REQUIRE(t && out);
    *out = dup(t->run.csv);
    return WCI_OK;
  });
}

wci_status wci_trajectory_summary(const wci_trajectory *t, char **out) {
  return guarded([&] {
    WCI_REQUIRE(t && out);
    *out = dup(t->run.summary);
    return WCI_OK;
  });
}

void wci_trajectory_free(wci_trajectory *t) { delete t; }

const char *wci_class_name(wci_class c) {
  return wci::attractor_class_name(static_cast<wci::AttractorClass>(c));
}

wci_status wci_sweep_run(const wci_scenario *s, const wci_run_options *o, wci_sweep **out) {
  return guarded([&] {
    WCI_REQUIRE(s && out);
    *out = new wci_sweep{wci::cmd_sweep(s->cfg, convert(o))};
    return WCI_OK;
  });
}

size_t wci_sweep_regime_count(const wci_sweep *w) { return w ? w->run.reports.size() : 0; }

double wci_sweep_regime_mu(const wci_sweep *w, size_t regime) {
  const auto *r = regime_at(w, regime);
  return r ? r->mu : 0.0;
}

size_t wci_sweep_component_count(const wci_sweep *w, size_t regime) {
  const auto *r = regime_at(w, regime);
  return r ? r->components.size() : 0;
}

wci_status wci_sweep_component(const wci_sweep *w, size_t regime, size_t index,
                               wci_component *out) {
  return guarded([&] {
    const auto *r = regime_at(w, regime);
    WCI_REQUIRE(r && out && index < r->components.size());
    const auto &c = r->components[index];
    out->cls = static_cast<wci_class>(c.cls);
    out->arc_count = c.arc_count;
    out->loop_score = c.loop_score;
    out->revisit_count = c.revisit_count;
    out->tentacle_count = c.tentacle_count;
    out->has_core = c.has_core;
    return WCI_OK;
  });
}

size_t wci_sweep_class_count(const wci_sweep *w, size_t regime, wci_class c) {
  const auto *r = regime_at(w, regime);
  if (!r) return 0;
  size_t n = 0;
  for (const auto &comp : r->components) n += comp.cls == static_cast<wci::AttractorClass>(c);
  return n;
}

size_t wci_sweep_failed_cells(const wci_sweep *w) {
  if (!w) return 0;
  size_t n = 0;
  for (const auto &c : w->run.cells) n += !c.error.empty();
  return n;
}

wci_status wci_sweep_report(const wci_sweep *w, char **out) {
  return guarded([&] {
    WCI_REQUIRE(w && out);
    *out = dup(w->run.text);
    return WCI_OK;
  });
}

size_t wci_sweep_cell_count(const wci_sweep *w) { return w ? w->run.cell_csv.size() : 0; }

wci_status wci_sweep_cell_csv(const wci_sweep *w, size_t index, char **name, char **csv) {
  return guarded([&] {
    WCI_REQUIRE(w && index < w->run.cell_csv.size());
    const auto &[n, c] = w->run.cell_csv[index];
    char *pn = name ? dup(n) : nullptr;
    if (csv) {
      try {
        *csv = dup(c);
      } catch (...) {
        std::free(pn);
        throw;
      }
    }
    if (name) *name = pn;
    return WCI_OK;
  });
}

void wci_sweep_free(wci_sweep *w) { delete w; }

}  // extern "C"
