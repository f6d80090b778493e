#pragma once

// Scenario files (JSON) and the builtin scenario registry.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attractor.hpp"
#include "hybrid.hpp"
#include "presets.hpp"
#include "singular_limit.hpp"

namespace wci {

enum class ModelKind { Rc, WilsonCowan, Coupled };
const char *model_kind_name(ModelKind k);

/// Impulse instants given either by a generator or by an explicit list.
struct InstantSpec {
  std::optional<InstantGenerator> generator;
  std::vector<double> list;

  std::vector<double> expand() const;
  bool operator==(const InstantSpec &) const = default;
};

struct AnalysisConfig {
  double domain_bound = 1.0;
  int grid_n = 64;
  double c2_tol = 1e-5;
  C3Grid c3;
  double layer_width = 0.05;
  double probe_horizon = 100;
  std::vector<double> convergence_mu;
  double convergence_threshold = 0;  // 0: no threshold on the last mu

  bool operator==(const AnalysisConfig &) const = default;
};

struct RegimeSpec {
  double mu = 1;
  std::vector<std::size_t> states;  // indices into initial_states
  bool operator==(const RegimeSpec &) const = default;
};

struct OutputConfig {
  int csv_every = 1;  // write every n-th sample of each segment
  bool operator==(const OutputConfig &) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  ModelKind kind = ModelKind::WilsonCowan;
  RcCircuit rc;
  PopulationParams population;
  std::optional<PopulationParams> passive;
  InstantSpec theta;
  InstantSpec eta;
  JumpMap regular_jump = jump_preset("identity");
  JumpMap singular_jump = jump_preset("identity");
  NegativeBasePolicy negative_base = NegativeBasePolicy::Clamp;
  std::vector<double> mu;
  std::vector<std::vector<double>> initial_states;
  std::vector<RegimeSpec> regimes;
  double horizon = 1;
  SolverConfig solver;
  ClassifierConfig classifier;
  AnalysisConfig analysis;
  OutputConfig output;

  /// Throws Config on any inconsistency.
  void validate() const;
  std::size_t dimension() const;
  ImpulseSchedule schedule() const;
  /// The mu list sets mu_e = mu_i of the impulsive pair; the passive pair
  /// keeps its own time constants.
  System system(double mu) const;
  /// Explicit regimes, or every mu paired with every initial state.
  std::vector<SweepRegime> sweep_regimes() const;

  bool operator==(const ScenarioConfig &) const = default;
};

std::vector<std::string> builtin_scenario_names();
/// Throws Config for unknown names.
ScenarioConfig builtin_scenario(std::string_view name);

/// Unknown keys and type mismatches are Config errors. The result is
/// validated.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario_file(const std::string &path);
/// Complete, deterministic JSON form (2-space indent, trailing newline).
std::string serialize_scenario(const ScenarioConfig &cfg);

}  // namespace wci
