#pragma once

// Checks of the three hypotheses behind the mu -> 0 limit, the piecewise
// constant limit path z(t), and the distance of a trajectory to it.

#include <optional>
#include <string>
#include <vector>

#include "hybrid.hpp"
#include "model.hpp"

namespace wci {

/// True for a state iff both eigenvalue real parts are negative.
std::vector<bool> check_c1(const SteadyStateReport &report);

struct C2Entry {
  std::size_t from = 0;  // index into report.points
  std::size_t to = 0;    // nearest stable state to the image
  State2 image;
  double residual = 0;
  bool pass = false;
};

/// For every stable state j, the stable state nearest to j + regular jump.
std::vector<C2Entry> check_c2(const SteadyStateReport &report,
                              const ImpulseSchedule &sched, double tol = 1e-5);

struct C3Sample {
  double mu = 0;
  double radius = 0;
  double max_k = 0;  // max |K / mu| over the sampled ball
  double max_j = 0;  // max |J / mu|
  double norm() const;
};

struct C3Entry {
  std::size_t state = 0;
  std::vector<C3Sample> samples;  // mu-major, both grids in descending order
  bool monotone = false;
  double final_value = 0;  // at the smallest mu and radius
  bool pass = false;
};

struct C3Grid {
  std::vector<double> mu{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> radius{1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8};
  double final_tol = 1e-3;

  bool operator==(const C3Grid &) const = default;
};

/// Samples each ball as its center plus rings at radius*k/4 (k = 1..4),
/// 16 angles each.
std::vector<C3Entry> check_c3(const ImpulseSchedule &sched,
                              const SteadyStateReport &report,
                              const C3Grid &grid = {});

struct ConditionReport {
  std::vector<bool> c1;
  std::vector<C2Entry> c2;
  double c2_tol = 1e-5;
  std::vector<C3Entry> c3;

  bool c1_pass() const;
  bool c2_pass() const;
  bool c3_pass() const;
  bool all_pass() const { return c1_pass() && c2_pass() && c3_pass(); }
};

ConditionReport verify_conditions(const SteadyStateReport &report,
                                  const ImpulseSchedule &sched,
                                  double c2_tol = 1e-5, const C3Grid &grid = {});

struct BasinProbe {
  double horizon = 100;
  double tol = 1e-3;
};

/// Index (into report.points) of the stable state the unimpulsed flow with
/// unit time constants reaches from x0. Throws BasinUndetermined otherwise.
std::size_t probe_basin(const PopulationParams &p, const SteadyStateReport &report,
                        State2 x0, const BasinProbe &probe = {},
                        const SolverConfig &cfg = {});

struct LimitPiece {
  double t0 = 0;  // piece covers (t0, t1]
  double t1 = 0;
  std::size_t state_index = 0;
  State2 state;
};

struct LimitSolution {
  std::vector<LimitPiece> pieces;
  std::size_t origin_domain = 0;

  /// z(t); t = 0 belongs to the first piece.
  State2 at(double t) const;
};

/// Throws ConditionViolated when a piece's state has no C2 image within tol.
LimitSolution limit_solution(const SteadyStateReport &report,
                             const ImpulseSchedule &sched, std::size_t start,
                             double horizon, double c2_tol = 1e-5);

/// sup ||(E, I)(t) - z(t)|| over samples, skipping t <= s + delta for each
/// segment start s (the initial layer and the layer after every impulse).
double convergence_metric(const HybridTrajectory &traj, const LimitSolution &z,
                          double layer_width);

struct ConvergencePoint {
  double mu = 0;
  double metric = 0;
  std::optional<std::string> error;
};

/// Simulates the impulsive pair with mu_e = mu_i = mu for each mu and
/// measures the distance to z.
std::vector<ConvergencePoint> convergence_study(
    const PopulationParams &p, const ImpulseSchedule &sched, State2 x0,
    double horizon, const LimitSolution &z, const std::vector<double> &mus,
    double layer_width, const SolverConfig &cfg = {});

bool strictly_decreasing(const std::vector<ConvergencePoint> &pts);

}  // namespace wci
