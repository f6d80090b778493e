#include "reports.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "error.hpp"

namespace wci {

std::string strf(const char *fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  va_list ap2;
  va_copy(ap2, ap);
  const int n = std::vsnprintf(nullptr, 0, fmt, ap);
  va_end(ap);
  std::string out(n > 0 ? static_cast<std::size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, ap2);
  va_end(ap2);
  return out;
}

namespace {

std::string complex_str(std::complex<double> z) {
  if (z.imag() == 0) return strf("%.6f", z.real());
  return strf("%.6f%+.6fi", z.real(), z.imag());
}

std::string vec_str(const std::vector<double> &v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += strf(k ? ", %.6g" : "%.6g", v[k]);
  return s + ")";
}

const char *yes(bool b) { return b ? "yes" : "no"; }

// Keeps "-0.00000000" out of fixed-point columns.
double tidy(double x, double eps = 5e-9) { return std::abs(x) < eps ? 0.0 : x; }

}  // namespace

std::string format_steady_states(const std::string &title, const SteadyStateReport &r) {
  std::string s = "# steady states: " + title + "\n";
  s += strf("# Newton search on a %dx%d grid over [-%g, %g]^2\n", r.grid_n, r.grid_n,
            r.domain_bound, r.domain_bound);
  s += strf("%-5s %12s %12s %24s %24s %s\n", "index", "E", "I", "lambda1", "lambda2",
            "hurwitz");
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const auto &p = r.points[k];
    s += strf("%-5zu %12.8f %12.8f %24s %24s %s\n", k, tidy(p.point.E), tidy(p.point.I),
              complex_str(p.eigen.first).c_str(), complex_str(p.eigen.second).c_str(),
              yes(p.hurwitz));
  }
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const auto &J = r.points[k].jacobian;
    s += strf("jacobian %zu: [[%.6f, %.6f], [%.6f, %.6f]]\n", k, J[0][0], J[0][1], J[1][0],
              J[1][1]);
  }
  s += strf("total %zu, stable %zu\n", r.points.size(), r.stable_indices().size());
  return s;
}

std::string format_conditions(const SteadyStateReport &states, const ConditionReport &c,
                              const std::optional<ConvergenceTable> &conv) {
  std::string s = "# hypotheses of the mu -> 0 limit\n";
  s += "[C1] Hurwitz Jacobian at each steady state\n";
  for (std::size_t k = 0; k < c.c1.size(); ++k) {
    const auto &p = states.points[k].point;
    s += strf("  state %zu (%.6f, %.6f): %s\n", k, tidy(p.E, 5e-7), tidy(p.I, 5e-7), c.c1[k] ? "stable" : "unstable");
  }
  s += strf("  verdict: %s\n", c.c1_pass() ? "pass" : "FAIL");

  s += strf("[C2] regular jump maps stable states to stable states (tol %g)\n", c.c2_tol);
  for (const auto &e : c.c2)
    s += strf("  %zu -> %zu  image (%.8f, %.8f)  residual %.3e  %s\n", e.from, e.to,
              tidy(e.image.E), tidy(e.image.I), e.residual, e.pass ? "pass" : "FAIL");
  s += strf("  verdict: %s\n", c.c2_pass() ? "pass" : "FAIL");

  s += "[C3] max |(K, J)/mu| over balls around stable states\n";
  for (const auto &e : c.c3) {
    s += strf("  state %zu\n", e.state);
    s += strf("    %-8s %-8s %12s %12s %12s\n", "mu", "radius", "|K/mu|", "|J/mu|", "norm");
    for (const auto &x : e.samples)
      s += strf("    %-8.0e %-8.0e %12.4e %12.4e %12.4e\n", x.mu, x.radius, x.max_k, x.max_j,
                x.norm());
    s += strf("    monotone %s, final %.4e, %s\n", yes(e.monotone), e.final_value,
              e.pass ? "pass" : "FAIL");
  }
  s += strf("  verdict: %s\n", c.c3_pass() ? "pass" : "FAIL");
  s += strf("overall: %s\n", c.all_pass() ? "pass" : "FAIL");

  if (conv) {
    s += strf("# convergence to the limit path from %s (basin of state %zu), layer %g\n",
              vec_str(conv->start).c_str(), conv->start_state, conv->layer_width);
    s += strf("%-8s %14s\n", "mu", "metric");
    for (const auto &p : conv->points) {
      if (p.error)
        s += strf("%-8g %14s  %s\n", p.mu, "error", p.error->c_str());
      else
        s += strf("%-8g %14.6e\n", p.mu, p.metric);
    }
    s += strf("strictly decreasing: %s\n", yes(conv->decreasing));
    if (conv->threshold > 0)
      s += strf("last below %g: %s\n", conv->threshold, yes(conv->below_threshold));
    s += strf("convergence: %s\n", conv->pass() ? "pass" : "FAIL");
  }
  return s;
}

std::string trajectory_csv(const HybridTrajectory &traj, int every) {
  if (every < 1) every = 1;
  std::string s = "t,E,I,e,i,segment,jump_kind\n";
  auto row = [&](const Arc &a, std::size_t k, std::size_t seg, const char *kind) {
    s += strf("%.12g", a.t[k]);
    const auto x = a.state(k);
    for (std::size_t d = 0; d < 4; ++d) s += d < x.size() ? strf(",%.12g", x[d]) : ",";
    s += strf(",%zu,%s\n", seg, kind);
  };
  for (std::size_t seg = 0; seg < traj.segments.size(); ++seg) {
    const Arc &a = traj.segments[seg];
    if (a.empty()) continue;
    const char *in_kind = seg > 0 && seg - 1 < traj.jumps.size()
                              ? jump_kind_name(traj.jumps[seg - 1].kind)
                              : "";
    const char *out_kind =
        seg < traj.jumps.size() && seg + 1 < traj.segments.size()
            ? jump_kind_name(traj.jumps[seg].kind)
            : "";
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
      const bool first = k == 0, last = k + 1 == n;
      if (!first && !last && k % static_cast<std::size_t>(every) != 0) continue;
      row(a, k, seg, first ? in_kind : last ? out_kind : "");
    }
  }
  if (traj.failed_at) {
    s += strf("%.12g,,,,,%zu,failure\n", *traj.failed_at,
              traj.segments.empty() ? 0 : traj.segments.size() - 1);
  }
  return s;
}

std::string format_attractor_reports(const std::string &title, const ClassifierConfig &cfg,
                                     const std::vector<AttractorReport> &reports) {
  static const char *names[] = {"cycle", "medusa", "ring", "medusa-without-ring",
                                "unclassified"};
  static const char *axis_names[] = {"E", "I", "e", "i"};
  std::string axes;
  for (int a : cfg.projection.axes) axes += (axes.empty() ? "" : ",") + std::string(axis_names[a]);

  std::string s = "# attractor report (heuristic classification): " + title + "\n";
  s += strf("# projection %s, transient_cut %g, merge_radius %g, loop_tol %g\n", axes.c_str(),
            cfg.transient_cut, cfg.merge_radius, cfg.loop_tol);
  for (const auto &r : reports) {
    s += strf("\nmu %g\n", r.mu);
    for (std::size_t k = 0; k < r.initial_states.size(); ++k)
      s += strf("  x0[%zu] = %s\n", k, vec_str(r.initial_states[k]).c_str());
    for (std::size_t k = 0; k < r.components.size(); ++k) {
      const auto &c = r.components[k];
      std::string traj;
      for (std::size_t t : c.trajectories) traj += (traj.empty() ? "" : " ") + strf("%zu", t);
      s += strf("  component %zu: %s arcs %zu loop_score %.3f revisit_count %zu tentacles %zu "
                "core %s x0 [%s]\n",
                k, attractor_class_name(c.cls), c.arc_count, c.loop_score, c.revisit_count,
                c.tentacle_count, yes(c.has_core), traj.c_str());
      s += "    box";
      for (std::size_t d = 0; d < cfg.projection.axes.size(); ++d)
        s += strf("%s[%.4f, %.4f]", d ? " x " : " ", c.lo[d], c.hi[d]);
      s += "\n";
    }
    for (const auto &f : r.failures)
      s += strf("  failure x0[%zu]: %s\n", f.initial_state, f.message.c_str());
  }
  s += "\n# counts\n";
  s += strf("%-8s", "mu");
  for (const char *n : names) s += strf(" %s", n);
  s += "\n";
  for (const auto &r : reports) {
    const auto counts = r.counts();
    s += strf("%-8g", r.mu);
    for (const char *n : names) {
      const auto it = counts.find(n);
      s += strf(" %*d", static_cast<int>(std::string(n).size()), it == counts.end() ? 0 : it->second);
    }
    s += "\n";
  }
  return s;
}

void write_file_atomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + strf(".tmp%ld", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename onto '" + path + "'");
  }
}

}  // namespace wci
