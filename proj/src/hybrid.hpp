#pragma once

// Hybrid (impulsive) simulation: smooth flow between prescribed instants,
// regular jumps at theta-instants, 1/mu-scaled singular jumps at eta-instants.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "integrator.hpp"
#include "jump_map.hpp"
#include "model.hpp"

namespace wci {

struct RcCircuit {
  double resistance = 1;
  double capacitance = 1;
  double current = 1;

  double time_constant() const { return resistance * capacitance; }
  void validate() const;
  bool operator==(const RcCircuit &) const = default;
};

/// The continuous part of a model: an RC membrane, one Wilson-Cowan pair
/// (E, I), or an impulsive pair (E, I) concatenated with a passive pair
/// (e, i). Jumps only ever act on the first pair.
class System {
 public:
  static System rc_circuit(RcCircuit rc);
  static System single(PopulationParams impulsive);
  static System coupled(PopulationParams impulsive, PopulationParams passive);

  std::size_t dimension() const;
  void rate(std::span<const double> x, std::span<double> dxdt) const;
  Field field() const;
  double min_time_constant() const;

  bool has_population() const { return !std::holds_alternative<RcCircuit>(model_); }
  const PopulationParams &impulsive() const;
  const PopulationParams *passive() const;

 private:
  struct Single { PopulationParams p; };
  struct Coupled { PopulationParams p; PopulationParams q; };
  explicit System(std::variant<RcCircuit, Single, Coupled> m) : model_(std::move(m)) {}
  std::variant<RcCircuit, Single, Coupled> model_;
};

struct ImpulseSchedule {
  std::vector<double> theta_instants;
  std::vector<double> eta_instants;
  JumpMap regular_jump = jump_preset("identity");
  JumpMap singular_jump = jump_preset("identity");
  NegativeBasePolicy negative_base = NegativeBasePolicy::Clamp;

  /// Instants positive, each list strictly increasing, no instant shared
  /// between the lists, regular map independent of mu.
  void validate() const;
  bool empty() const { return theta_instants.empty() && eta_instants.empty(); }
};

enum class JumpKind { Regular, Singular };
const char *jump_kind_name(JumpKind k);

struct JumpRecord {
  double t = 0;
  JumpKind kind = JumpKind::Regular;
  State2 pre;
  State2 post;
  bool clamped = false;
};

State2 apply_regular_jump(const ImpulseSchedule &sched, State2 s);
/// Raw (K, J) before division by the time constants.
State2 singular_raw(const ImpulseSchedule &sched, State2 s, double mu_e,
                    double mu_i, bool *clamped = nullptr);
State2 apply_singular_jump(const ImpulseSchedule &sched, State2 s, double mu_e,
                           double mu_i, bool *clamped = nullptr);

struct HybridTrajectory {
  std::size_t dim = 0;
  double horizon = 0;
  std::vector<Arc> segments;
  std::vector<JumpRecord> jumps;
  std::vector<std::string> warnings;
  /// Set when the run stopped early; the trajectory is then partial.
  std::optional<double> failed_at;
  std::string failure;

  std::size_t sample_count() const;
  std::span<const double> endpoint() const { return segments.back().back(); }
};

class SimulationError : public TimedError {
 public:
  SimulationError(ErrorCode code, double t, const std::string &what,
                  HybridTrajectory partial)
      : TimedError(code, t, what),
        partial_(std::make_shared<HybridTrajectory>(std::move(partial))) {}

  const HybridTrajectory &partial() const noexcept { return *partial_; }

 private:
  std::shared_ptr<const HybridTrajectory> partial_;
};

/// Instants at or beyond the horizon are ignored. Throws SimulationError
/// (carrying the partial trajectory) on StepUnderflow or DomainError.
HybridTrajectory simulate(const System &system, const ImpulseSchedule &sched,
                          std::span<const double> x0, double horizon,
                          const SolverConfig &cfg);

}  // namespace wci
