#include "attractor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "error.hpp"

namespace wci {

void Projection::validate(std::size_t dim) const {
  if (axes.size() < 2 || axes.size() > 3)
    throw Error(ErrorCode::Config, "projection needs 2 or 3 axes");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a] < 0 || static_cast<std::size_t>(axes[a]) >= dim)
      throw Error(ErrorCode::Config, "projection axis out of range");
    for (std::size_t b = 0; b < a; ++b)
      if (axes[a] == axes[b]) throw Error(ErrorCode::Config, "projection axes repeat");
  }
}

void ClassifierConfig::validate() const {
  if (!(transient_cut >= 0)) throw Error(ErrorCode::Config, "transient_cut must be >= 0");
  if (!(merge_radius > 0)) throw Error(ErrorCode::Config, "merge_radius must be > 0");
  if (!(loop_tol > 0)) throw Error(ErrorCode::Config, "loop_tol must be > 0");
  if (!(settle_ratio >= 0) || !(settle_floor >= 0))
    throw Error(ErrorCode::Config, "settle thresholds must be >= 0");
  if (angle_bins < 4) throw Error(ErrorCode::Config, "angle_bins must be >= 4");
  if (!(cluster_stride > 0) || !(classify_stride > 0))
    throw Error(ErrorCode::Config, "strides must be > 0");
  if (closure_every < 1) throw Error(ErrorCode::Config, "closure_every must be >= 1");
}

void SegmentGraph::append(const SegmentGraph &other) {
  const std::size_t off = nodes.size();
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  for (JumpEdge e : other.edges) {
    e.from += off;
    e.to += off;
    edges.push_back(e);
  }
  for (int k = 0; k < 3; ++k) jumping[k] = jumping[k] || other.jumping[k];
}

std::vector<int> SegmentGraph::jump_axes() const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(projection.axes.size()); ++k)
    if (jumping[k]) out.push_back(k);
  return out;
}

namespace {

// Keeps the first and last sample and one sample per stride bin.
std::vector<std::size_t> decimate(const std::vector<double> &t, double stride) {
  std::vector<std::size_t> keep;
  if (t.empty()) return keep;
  keep.push_back(0);
  double bin = std::floor(t[0] / stride + 1e-9);
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    const double b = std::floor(t[k] / stride + 1e-9);
    if (b > bin) {
      keep.push_back(k);
      bin = b;
    }
  }
  if (t.size() > 1) keep.push_back(t.size() - 1);
  return keep;
}

Point3 project(const Projection &pr, std::span<const double> x) {
  Point3 p{};
  for (std::size_t a = 0; a < pr.axes.size(); ++a) p[a] = x[pr.axes[a]];
  return p;
}

double dist2(const Point3 &a, const Point3 &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

struct CellKey {
  long long x, y, z;
  bool operator==(const CellKey &) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey &k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// np.gradient-style derivative (second order inside, first order at ends).
std::vector<double> gradient(const std::vector<double> &f, const std::vector<double> &t) {
  const std::size_t n = f.size();
  std::vector<double> g(n, 0.0);
  if (n < 3) return g;
  g[0] = (f[1] - f[0]) / (t[1] - t[0]);
  g[n - 1] = (f[n - 1] - f[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double hs = t[k] - t[k - 1], hd = t[k + 1] - t[k];
    g[k] = (hs * hs * f[k + 1] + (hd * hd - hs * hs) * f[k] - hd * hd * f[k - 1]) /
           (hs * hd * (hd + hs));
  }
  return g;
}

std::vector<double> unwrap(std::vector<double> a) {
  double shift = 0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double raw = a[k];
    double d = raw + shift - a[k - 1];
    while (d > std::numbers::pi) { shift -= 2 * std::numbers::pi; d -= 2 * std::numbers::pi; }
    while (d < -std::numbers::pi) { shift += 2 * std::numbers::pi; d += 2 * std::numbers::pi; }
    a[k] = raw + shift;
  }
  return a;
}

}  // namespace

SegmentGraph extract_segments(const HybridTrajectory &traj, const ClassifierConfig &cfg,
                              std::size_t trajectory_id) {
  cfg.validate();
  cfg.projection.validate(traj.dim);
  SegmentGraph g;
  g.projection = cfg.projection;
  const auto &axes = cfg.projection.axes;
  for (const auto &j : traj.jumps) {
    const double d[2] = {j.post.E - j.pre.E, j.post.I - j.pre.I};
    for (std::size_t a = 0; a < axes.size(); ++a)
      if (axes[a] < 2 && d[axes[a]] != 0) g.jumping[a] = true;
  }

  std::vector<std::ptrdiff_t> node_of(traj.segments.size(), -1);
  for (std::size_t k = 0; k < traj.segments.size(); ++k) {
    const Arc &arc = traj.segments[k];
    std::vector<double> t;
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < arc.size(); ++s)
      if (arc.t[s] >= cfg.transient_cut) {
        t.push_back(arc.t[s]);
        idx.push_back(s);
      }
    if (t.size() < 2) continue;
    ArcNode node;
    node.trajectory = trajectory_id;
    node.segment = k;
    node.entered_by_jump = k > 0;
    for (std::size_t keep : decimate(t, cfg.classify_stride)) {
      node.t.push_back(t[keep]);
      node.p.push_back(project(cfg.projection, arc.state(idx[keep])));
    }
    node_of[k] = static_cast<std::ptrdiff_t>(g.nodes.size());
    g.nodes.push_back(std::move(node));
  }
  if (g.nodes.empty())
    throw Error(ErrorCode::EmptyPostTransient, "nothing left after the transient cut");

  for (std::size_t k = 0; k + 1 < traj.segments.size() && k < traj.jumps.size(); ++k) {
    if (node_of[k] < 0 || node_of[k + 1] < 0) continue;
    JumpEdge e;
    e.from = static_cast<std::size_t>(node_of[k]);
    e.to = static_cast<std::size_t>(node_of[k + 1]);
    e.t = traj.jumps[k].t;
    e.kind = traj.jumps[k].kind;
    e.delta = {g.nodes[e.to].p.front()[0] - g.nodes[e.from].p.back()[0],
               g.nodes[e.to].p.front()[1] - g.nodes[e.from].p.back()[1],
               g.nodes[e.to].p.front()[2] - g.nodes[e.from].p.back()[2]};
    g.edges.push_back(e);
  }
  return g;
}

std::vector<std::vector<std::size_t>> cluster_components(const SegmentGraph &g,
                                                         const ClassifierConfig &cfg) {
  cfg.validate();
  const double r = cfg.merge_radius;
  const double r2 = r * r;
  struct Entry {
    std::size_t arc;
    Point3 q;
  };
  std::unordered_map<CellKey, std::vector<Entry>, CellHash> grid;
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const ArcNode &n = g.nodes[a];
    for (std::size_t k : decimate(n.t, cfg.cluster_stride)) {
      const Point3 &q = n.p[k];
      const CellKey key{static_cast<long long>(std::floor(q[0] / r)),
                        static_cast<long long>(std::floor(q[1] / r)),
                        static_cast<long long>(std::floor(q[2] / r))};
      grid[key].push_back({a, q});
    }
  }
  UnionFind uf(g.nodes.size());
  for (const auto &[key, list] : grid) {
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find({key.x + dx, key.y + dy, key.z + dz});
          if (it == grid.end()) continue;
          for (const Entry &a : list)
            for (const Entry &b : it->second)
              if (a.arc != b.arc && uf.find(a.arc) != uf.find(b.arc) &&
                  dist2(a.q, b.q) < r2)
                uf.unite(a.arc, b.arc);
        }
  }
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::ptrdiff_t> slot(g.nodes.size(), -1);
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const std::size_t root = uf.find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(comps.size());
      comps.emplace_back();
    }
    comps[slot[root]].push_back(a);
  }
  return comps;
}

const char *attractor_class_name(AttractorClass c) {
  switch (c) {
    case AttractorClass::Cycle: return "cycle";
    case AttractorClass::Medusa: return "medusa";
    case AttractorClass::Ring: return "ring";
    case AttractorClass::MedusaWithoutRing: return "medusa-without-ring";
    default: return "unclassified";
  }
}

ComponentSummary classify_component(const SegmentGraph &g,
                                    const std::vector<std::size_t> &component,
                                    const ClassifierConfig &cfg) {
  if (component.empty())
    throw Error(ErrorCode::InvalidArgument, "empty component");
  const std::size_t dims = g.projection.axes.size();

  ComponentSummary out;
  out.arc_count = component.size();
  out.lo = {INFINITY, INFINITY, INFINITY};
  out.hi = {-INFINITY, -INFINITY, -INFINITY};
  Point3 cen{};
  std::size_t total = 0;
  for (std::size_t i : component) {
    for (const Point3 &q : g.nodes[i].p) {
      for (std::size_t d = 0; d < 3; ++d) {
        cen[d] += q[d];
        out.lo[d] = std::min(out.lo[d], q[d]);
        out.hi[d] = std::max(out.hi[d], q[d]);
      }
      ++total;
    }
    out.trajectories.push_back(g.nodes[i].trajectory);
  }
  for (double &c : cen) c /= static_cast<double>(total);
  std::sort(out.trajectories.begin(), out.trajectories.end());
  out.trajectories.erase(std::unique(out.trajectories.begin(), out.trajectories.end()),
                         out.trajectories.end());

  // Speed is measured in the jumping coordinates; angles are taken in the
  // plane of the others.
  std::vector<int> speed_axes = g.jump_axes();
  std::vector<int> plane;
  for (int d = 0; d < static_cast<int>(dims); ++d)
    if (std::find(speed_axes.begin(), speed_axes.end(), d) == speed_axes.end())
      plane.push_back(d);
  if (plane.size() != 2) {
    std::vector<std::pair<double, int>> var;
    for (int d = 0; d < static_cast<int>(dims); ++d) {
      double s = 0;
      for (std::size_t i : component)
        for (const Point3 &q : g.nodes[i].p) s += (q[d] - cen[d]) * (q[d] - cen[d]);
      var.push_back({-s, d});
    }
    std::sort(var.begin(), var.end());
    plane = {std::min(var[0].second, var[1].second), std::max(var[0].second, var[1].second)};
  }
  if (speed_axes.empty())
    for (int d = 0; d < static_cast<int>(dims); ++d) speed_axes.push_back(d);
  const int a0 = plane[0], a1 = plane[1];
  auto angle = [&](const Point3 &q) {
    return std::atan2(q[a1] - cen[a1], q[a0] - cen[a0]);
  };

  std::vector<bool> bins(cfg.angle_bins, false);
  bool any_settled = false;
  std::size_t core_arcs = 0, closes = 0, entered = 0;
  for (std::size_t i : component) {
    const ArcNode &n = g.nodes[i];
    const std::size_t m = n.p.size();
    if (n.entered_by_jump) ++entered;

    std::vector<double> speed(m, 0.0);
    for (int d : speed_axes) {
      std::vector<double> f(m);
      for (std::size_t k = 0; k < m; ++k) f[k] = n.p[k][d];
      const auto gd = gradient(f, n.t);
      for (std::size_t k = 0; k < m; ++k) speed[k] += gd[k] * gd[k];
    }
    double vmax = 0;
    for (double &v : speed) {
      v = std::sqrt(v);
      vmax = std::max(vmax, v);
    }
    bool arc_settled = false;
    double ulo = INFINITY, uhi = -INFINITY;
    bool unsettled = false;
    for (std::size_t k = 0; k < m; ++k) {
      const bool s = speed[k] <= cfg.settle_ratio * vmax || speed[k] <= cfg.settle_floor;
      if (s) {
        arc_settled = true;
        const double ang = angle(n.p[k]);
        int b = static_cast<int>(std::floor((ang + std::numbers::pi) /
                                            (2 * std::numbers::pi) * cfg.angle_bins));
        b = ((b % cfg.angle_bins) + cfg.angle_bins) % cfg.angle_bins;
        bins[b] = true;
      } else {
        unsettled = true;
        ulo = std::min(ulo, n.p[k][speed_axes[0]]);
        uhi = std::max(uhi, n.p[k][speed_axes[0]]);
      }
    }
    if (arc_settled) {
      any_settled = true;
      ++core_arcs;
    }
    if (n.entered_by_jump && unsettled && uhi - ulo >= cfg.loop_tol) ++out.tentacle_count;

    // Self-closure: after one full turn around the centroid, is the arc back
    // within loop_tol of where it was?
    std::vector<double> ang(m);
    for (std::size_t k = 0; k < m; ++k) ang[k] = angle(n.p[k]);
    ang = unwrap(std::move(ang));
    std::size_t j = 0;
    const double tol2 = cfg.loop_tol * cfg.loop_tol;
    for (std::size_t k = 0; k < m; k += cfg.closure_every) {
      while (j < m && std::abs(ang[j] - ang[k]) < 2 * std::numbers::pi) ++j;
      if (j >= m) break;
      if (dist2(n.p[j], n.p[k]) < tol2) {
        ++closes;
        break;
      }
    }
  }

  out.has_core = any_settled && std::all_of(bins.begin(), bins.end(), [](bool b) { return b; });
  out.revisit_count = out.has_core ? core_arcs - 1 : 0;
  out.loop_score = static_cast<double>(closes) / static_cast<double>(component.size());

  if (closes == component.size() && entered == 0)
    out.cls = AttractorClass::Cycle;
  else if (out.has_core && out.revisit_count >= 1)
    out.cls = out.tentacle_count >= 2 ? AttractorClass::Medusa : AttractorClass::Ring;
  else if (!out.has_core && out.tentacle_count >= 2)
    out.cls = AttractorClass::MedusaWithoutRing;
  else
    out.cls = AttractorClass::Unclassified;
  return out;
}

std::map<std::string, int> AttractorReport::counts() const {
  std::map<std::string, int> out;
  for (const auto &c : components) ++out[attractor_class_name(c.cls)];
  return out;
}

AttractorReport analyze_trajectories(double mu,
                                     const std::vector<std::vector<double>> &x0s,
                                     const std::vector<HybridTrajectory> &trajs,
                                     const ClassifierConfig &cfg,
                                     const std::vector<std::size_t> &ids) {
  AttractorReport rep;
  rep.mu = mu;
  rep.initial_states = x0s;
  if (trajs.empty()) return rep;
  SegmentGraph g;
  g.projection = cfg.projection;
  for (std::size_t k = 0; k < trajs.size(); ++k) g.append(extract_segments(trajs[k], cfg, ids.empty() ? k : ids[k]));
  for (const auto &comp : cluster_components(g, cfg))
    rep.components.push_back(classify_component(g, comp, cfg));
  return rep;
}

std::vector<AttractorReport> mu_sweep(const SweepInput &in, std::vector<SweepCell> *cells_out) {
  if (in.regimes.empty()) throw Error(ErrorCode::InvalidArgument, "mu list is empty");
  if (!in.make_system) throw Error(ErrorCode::InvalidArgument, "no system builder");
  in.classifier.validate();
  for (const auto &r : in.regimes)
    if (!(r.mu > 0)) throw Error(ErrorCode::InvalidArgument, "mu must be > 0");

  std::vector<SweepCell> cells;
  for (std::size_t r = 0; r < in.regimes.size(); ++r)
    for (std::size_t k = 0; k < in.regimes[r].initial_states.size(); ++k) {
      SweepCell c;
      c.mu = in.regimes[r].mu;
      c.regime = r;
      c.initial_state = k;
      cells.push_back(std::move(c));
    }

  auto run = [&](SweepCell &c) {
    try {
      const System sys = in.make_system(c.mu);
      c.trajectory = simulate(sys, in.schedule, in.regimes[c.regime].initial_states[c.initial_state],
                              in.horizon, in.solver);
    } catch (const SimulationError &e) {
      c.trajectory = e.partial();
      c.error = e.what();
      c.error_code = static_cast<int>(e.code());
    } catch (const Error &e) {
      c.error = e.what();
      c.error_code = static_cast<int>(e.code());
    }
  };

  unsigned jobs = in.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : in.jobs;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cells.size()));
  if (jobs <= 1) {
    for (auto &c : cells) run(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) run(cells[k]);
      });
    for (auto &t : pool) t.join();
  }

  std::vector<AttractorReport> out;
  for (std::size_t r = 0; r < in.regimes.size(); ++r) {
    std::vector<HybridTrajectory> ok;
    std::vector<std::size_t> ids;
    std::vector<CellFailure> failures;
    for (const auto &c : cells) {
      if (c.regime != r) continue;
      if (c.error.empty()) {
        ok.push_back(*c.trajectory);
        ids.push_back(c.initial_state);
      } else
        failures.push_back({c.initial_state, c.error});
    }
    AttractorReport rep;
    try {
      rep = analyze_trajectories(in.regimes[r].mu, in.regimes[r].initial_states, ok,
                                 in.classifier, ids);
    } catch (const Error &e) {
      rep.mu = in.regimes[r].mu;
      rep.initial_states = in.regimes[r].initial_states;
      rep.components.clear();
      failures.push_back({0, e.what()});
    }
    rep.failures = std::move(failures);
    out.push_back(std::move(rep));
  }
  if (cells_out) *cells_out = std::move(cells);
  return out;
}

}  // namespace wci
