#pragma once

// Post-transient structure of hybrid trajectories: arcs between impulses,
// spatial clustering into components, and a heuristic classification of
// each component (ring, cycle, medusa, medusa-without-ring).

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybrid.hpp"

namespace wci {

/// Which state coordinates are kept (2 or 3 of them).
struct Projection {
  std::vector<int> axes{0, 2, 3};

  void validate(std::size_t dim) const;
  bool operator==(const Projection &) const = default;
};

using Point3 = std::array<double, 3>;

struct ArcNode {
  std::size_t trajectory = 0;
  std::size_t segment = 0;
  bool entered_by_jump = false;
  std::vector<double> t;
  std::vector<Point3> p;
};

struct JumpEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double t = 0;
  JumpKind kind = JumpKind::Regular;
  Point3 delta{};  // projected post - pre
};

struct SegmentGraph {
  Projection projection;
  std::vector<ArcNode> nodes;
  std::vector<JumpEdge> edges;
  std::array<bool, 3> jumping{};  // projected axes moved by some jump

  /// Concatenates another graph (nodes renumbered).
  void append(const SegmentGraph &other);
  /// Positions (0..2) of the projected axes that jumps move.
  std::vector<int> jump_axes() const;
};

struct ClassifierConfig {
  double transient_cut = 30;
  double merge_radius = 0.05;
  double loop_tol = 0.01;
  double settle_ratio = 0.1;
  double settle_floor = 1e-3;
  int angle_bins = 36;
  double cluster_stride = 0.05;   // time spacing of points used for clustering
  double classify_stride = 0.01;  // time spacing used by the classifier
  int closure_every = 10;         // closure test start points, in samples
  Projection projection;

  void validate() const;
  bool operator==(const ClassifierConfig &) const = default;
};

/// Drops samples with t < transient_cut, splits at jumps and projects.
/// Arcs are decimated to classify_stride. Throws EmptyPostTransient.
SegmentGraph extract_segments(const HybridTrajectory &traj, const ClassifierConfig &cfg,
                              std::size_t trajectory_id = 0);

/// Single linkage over arcs: two arcs share a component when some of their
/// points (taken every cluster_stride) are closer than merge_radius. Jump
/// edges are ignored. Components are ordered by their smallest node index.
std::vector<std::vector<std::size_t>> cluster_components(const SegmentGraph &g,
                                                         const ClassifierConfig &cfg);

enum class AttractorClass { Cycle, Medusa, Ring, MedusaWithoutRing, Unclassified };
const char *attractor_class_name(AttractorClass c);

struct ComponentSummary {
  AttractorClass cls = AttractorClass::Unclassified;
  std::size_t arc_count = 0;
  double loop_score = 0;
  std::size_t revisit_count = 0;
  std::size_t tentacle_count = 0;
  bool has_core = false;
  std::vector<std::size_t> trajectories;
  Point3 lo{}, hi{};
};

ComponentSummary classify_component(const SegmentGraph &g,
                                    const std::vector<std::size_t> &component,
                                    const ClassifierConfig &cfg);

struct CellFailure {
  std::size_t initial_state = 0;
  std::string message;
};

struct AttractorReport {
  double mu = 0;
  std::vector<std::vector<double>> initial_states;
  std::vector<ComponentSummary> components;
  std::vector<CellFailure> failures;

  std::map<std::string, int> counts() const;
};

/// Classifies all arcs of the given trajectories together. `ids` labels
/// each trajectory (default: its position).
AttractorReport analyze_trajectories(double mu,
                                     const std::vector<std::vector<double>> &x0s,
                                     const std::vector<HybridTrajectory> &trajs,
                                     const ClassifierConfig &cfg,
                                     const std::vector<std::size_t> &ids = {});

struct SweepRegime {
  double mu = 1;
  std::vector<std::vector<double>> initial_states;
};

struct SweepCell {
  double mu = 0;
  std::size_t regime = 0;
  std::size_t initial_state = 0;
  std::optional<HybridTrajectory> trajectory;  // possibly partial on failure
  std::string error;
  int error_code = 0;
};

struct SweepInput {
  std::function<System(double mu)> make_system;
  ImpulseSchedule schedule;
  std::vector<SweepRegime> regimes;
  double horizon = 1;
  SolverConfig solver;
  ClassifierConfig classifier;
  unsigned jobs = 1;  // 0: one per hardware thread
};

/// One report per regime, in input order. Failed cells are recorded in the
/// report and the sweep continues. When `cells` is given it receives every
/// (mu, x0) run in deterministic order.
std::vector<AttractorReport> mu_sweep(const SweepInput &in,
                                      std::vector<SweepCell> *cells = nullptr);

}  // namespace wci
