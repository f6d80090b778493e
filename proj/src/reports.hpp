#pragma once

// Text and CSV renderings of analysis results. Everything here is a pure
// function of its inputs so reruns give byte-identical files.

#include <optional>
#include <string>
#include <vector>

#include "attractor.hpp"
#include "hybrid.hpp"
#include "model.hpp"
#include "scenario.hpp"
#include "singular_limit.hpp"

namespace wci {

std::string format_steady_states(const std::string &title, const SteadyStateReport &r);

struct ConvergenceTable {
  std::vector<ConvergencePoint> points;
  std::vector<double> start;       // x0 used
  std::size_t start_state = 0;     // stable state the basin probe reached
  double layer_width = 0;
  double threshold = 0;            // 0: not checked
  bool decreasing = false;
  bool below_threshold = true;
  bool pass() const { return decreasing && below_threshold; }
};

std::string format_conditions(const SteadyStateReport &states, const ConditionReport &c,
                              const std::optional<ConvergenceTable> &conv);

/// Header `t,E,I,e,i,segment,jump_kind`. The rows on either side of a jump
/// share t and both carry the jump kind. `every` thins the interior of each
/// segment; its end points are always written. A failed run ends with a row
/// whose jump_kind is `failure`.
std::string trajectory_csv(const HybridTrajectory &traj, int every = 1);

std::string format_attractor_reports(const std::string &title,
                                     const ClassifierConfig &cfg,
                                     const std::vector<AttractorReport> &reports);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::string &path, const std::string &content);

/// printf into a std::string.
std::string strf(const char *fmt, ...) __attribute__((format(printf, 1, 2)));

}  // namespace wci
