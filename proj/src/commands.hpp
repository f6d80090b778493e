#pragma once

// The four scenario-driven operations behind the CLI and the C API. Each
// returns both structured results and the rendered artifacts.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "reports.hpp"
#include "scenario.hpp"

namespace wci {

struct RunOptions {
  std::optional<double> mu;                  // overrides the scenario's mu list
  std::optional<std::vector<double>> x0;     // overrides its initial states
  unsigned jobs = 1;
  bool convergence = false;                  // verify: run the convergence study
};

struct SteadyOutcome {
  std::vector<std::pair<std::string, SteadyStateReport>> pairs;  // label, report
  std::string text;
};
/// Throws Config for scenarios without a population, NoConvergence.
SteadyOutcome cmd_steady_states(const ScenarioConfig &cfg);

struct VerifyOutcome {
  SteadyStateReport states;
  ConditionReport conditions;
  std::optional<ConvergenceTable> convergence;
  bool simulation_failed = false;
  std::string text;
  bool pass() const {
    return conditions.all_pass() && (!convergence || convergence->pass());
  }
};
VerifyOutcome cmd_verify(const ScenarioConfig &cfg, const RunOptions &opts);

struct SimulateOutcome {
  double mu = 0;
  std::vector<double> x0;
  HybridTrajectory trajectory;  // partial when error is set
  std::optional<std::string> error;
  ErrorCode error_code = ErrorCode::StepUnderflow;
  std::string csv;
  std::string summary;
};
/// Solver failures are reported in the outcome, not thrown.
SimulateOutcome cmd_simulate(const ScenarioConfig &cfg, const RunOptions &opts);

struct SweepOutcome {
  std::vector<AttractorReport> reports;
  std::vector<SweepCell> cells;
  std::vector<std::pair<std::string, std::string>> cell_csv;  // file name, content
  std::string text;
  bool any_failed() const;
};
SweepOutcome cmd_sweep(const ScenarioConfig &cfg, const RunOptions &opts);

}  // namespace wci
